from flask import Flask, jsonify, Response, request
import logging

from src.belief import BeliefSettings
from src.graph import build_fixture_illustrative, instance_from_dict, InstanceValidationError
from src.oracle import OracleCaps, clairvoyant_exact
from src.policies import make_policy, PolicySpecError
from src.traversal import run_episode


def _posted_instance(data):
    """The posted instance document, or the fixture when none is given"""
    document = data.get('instance')
    if document is None:
        return build_fixture_illustrative()
    return instance_from_dict(document)


def register_episode_routes(app: Flask):
    """
    Register episode and oracle API routes

    Args:
        app: Flask application instance
    """
    logger = logging.getLogger("API")

    @app.route('/api/episodes', methods=['POST'])
    def run_one_episode() -> Response:
        """Run one episode of a policy on a posted instance (or the fixture)"""
        data = request.get_json(silent=True) or {}
        try:
            instance = _posted_instance(data)
            policy = make_policy(str(data.get('policy', 'M')))
            seed = int(data.get('seed', 0))
        except (InstanceValidationError, PolicySpecError) as e:
            return jsonify({'error': str(e)}), 400
        except (TypeError, ValueError) as e:
            return jsonify({'error': f"Invalid request: {e}"}), 400

        try:
            log = run_episode(instance, policy, seed=seed, settings=BeliefSettings.from_config(), logger=logger)
        except Exception as e:
            logger.exception("Error running episode")
            return jsonify({'error': str(e)}), 500

        response_data = log.to_dict()
        response_data['walk'] = instance.format_walk(log.walk)
        return jsonify(response_data), 200

    @app.route('/api/oracle', methods=['POST'])
    def solve_instance() -> Response:
        """Solve a posted instance (or the fixture) under perfect information"""
        data = request.get_json(silent=True) or {}
        try:
            instance = _posted_instance(data)
        except (InstanceValidationError, ValueError) as e:
            return jsonify({'error': str(e)}), 400

        try:
            result = clairvoyant_exact(instance, OracleCaps.from_config(), prune=bool(data.get('prune', True)),
                                       logger=logger)
        except Exception as e:
            logger.exception("Error solving instance")
            return jsonify({'error': str(e)}), 500
        return jsonify(result.to_dict(instance)), 200
