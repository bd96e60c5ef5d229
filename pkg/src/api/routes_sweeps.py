from dataclasses import asdict
from flask import Flask, jsonify, Response, request
import logging

from src.belief import BeliefSettings
from src.bench import ExperimentDesign, run_sweep, summarize, rows_to_csv, MissingBaselineError
from src.config import config
from src.utils.auth import require_admin_access


def register_sweep_routes(app: Flask):
    """
    Register sweep API routes

    Args:
        app: Flask application instance
    """
    logger = logging.getLogger("API")

    @app.route('/api/sweeps', methods=['POST'])
    @require_admin_access
    def start_sweep() -> Response:
        """Run a (small) sweep design synchronously and return its rows and summary"""
        data = request.get_json(silent=True) or {}
        try:
            design = ExperimentDesign.from_config(**data.get('design', {}))
        except (TypeError, ValueError) as e:
            return jsonify({'error': f"Invalid design: {e}"}), 400

        try:
            enumeration = config.get_config('system_settings').get('enumeration')
            rows = run_sweep(design, parallelism=data.get('parallelism'),
                             settings=BeliefSettings.from_config(), enumeration=enumeration, logger=logger)
        except ValueError as e:
            return jsonify({'error': str(e)}), 400
        except Exception as e:
            logger.exception("Error running sweep")
            return jsonify({'error': str(e)}), 500

        response_data = {'rows': len(rows), 'csv': rows_to_csv(rows)}
        try:
            response_data['summary'] = [asdict(row) for row in summarize(rows)]
        except MissingBaselineError as e:
            response_data['summary_error'] = str(e)
        return jsonify(response_data), 200
