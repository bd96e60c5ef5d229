import os

from .app import create_app

# gunicorn entry point: src.api.wsgi:app
app = create_app()

if __name__ == '__main__':
    app.run(host=os.environ.get('BAYESWALK_API_HOST', '127.0.0.1'),
            port=int(os.environ.get('BAYESWALK_API_PORT', '5000')))
