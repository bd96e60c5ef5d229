from flask import Flask
import logging

from .routes_instances import register_instance_routes
from .routes_episodes import register_episode_routes
from .routes_sweeps import register_sweep_routes

def register_routes(app: Flask):
    """
    Register all API routes with the Flask application

    Args:
        app: Flask application instance
    """
    # Register route groups
    register_instance_routes(app)
    register_episode_routes(app)
    register_sweep_routes(app)

    # Register error handlers
    @app.errorhandler(404)
    def not_found(error):
        return {'error': 'Resource not found'}, 404

    @app.errorhandler(405)
    def method_not_allowed(error):
        return {'error': 'Method not allowed'}, 405

    @app.errorhandler(500)
    def server_error(error):
        logger = logging.getLogger("API")
        logger.error(f"Server error: {error}")
        return {'error': 'Internal server error'}, 500
