from flask import Flask, jsonify, Response, request
import logging

from src.config import config
from src.graph import build_fixture_illustrative, erdos_renyi, instance_to_dict, GenerationError


def register_instance_routes(app: Flask):
    """
    Register instance-related API routes

    Args:
        app: Flask application instance
    """
    logger = logging.getLogger("API")

    @app.route('/api/fixture', methods=['GET'])
    def get_fixture() -> Response:
        """Get the illustrative five-node instance"""
        instance = build_fixture_illustrative()
        return jsonify({'hash': instance.instance_hash(), 'instance': instance_to_dict(instance)}), 200

    @app.route('/api/instances', methods=['POST'])
    def generate_instance() -> Response:
        """Generate a connected G(n, p) instance"""
        data = request.get_json(silent=True)
        if not data or 'n' not in data or 'p' not in data:
            return jsonify({'error': 'Missing n or p'}), 400

        try:
            n = int(data['n'])
            p = float(data['p'])
            seed = int(data.get('seed', 0))
        except (TypeError, ValueError):
            return jsonify({'error': 'n, p and seed must be numbers'}), 400

        system = config.get_config('system_settings')
        generator = system.get('generator', {})
        try:
            instance = erdos_renyi(n, p, seed, horizon=int(system.get('horizon', 500)),
                                   max_attempts=int(generator.get('max_attempts', 100000)),
                                   coord_range=tuple(generator.get('coord_range', (0.0, 10.0))),
                                   logger=logger)
        except GenerationError as e:
            logger.warning(f"Generation failed: {e}")
            return jsonify({'error': str(e)}), 422
        except ValueError as e:
            return jsonify({'error': str(e)}), 400
        except Exception as e:
            logger.exception("Error generating instance")
            return jsonify({'error': str(e)}), 500

        logger.info(f"Generated {instance.name}")
        return jsonify({'hash': instance.instance_hash(), 'instance': instance_to_dict(instance)}), 200
