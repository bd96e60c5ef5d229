import pytest

from src.api import create_app
from src.graph import instance_to_dict


@pytest.fixture
def client():
    app = create_app()
    app.config['TESTING'] = True
    return app.test_client()


SMALL_SWEEP = {
    'design': {
        'sizes': [6],
        'edge_probabilities': [0.8],
        'replications': 2,
        'policies': ['M', 'UCB:lambda=1']
    },
    'parallelism': 1
}


def test_fixture(client):
    response = client.get('/api/fixture')
    assert response.status_code == 200
    data = response.get_json()
    assert len(data['instance']['nodes']) == 5
    assert len(data['hash']) > 0


def test_generate_instance(client):
    response = client.post('/api/instances', json={'n': 6, 'p': 0.7, 'seed': 2})
    assert response.status_code == 200
    assert len(response.get_json()['instance']['nodes']) == 6

    again = client.post('/api/instances', json={'n': 6, 'p': 0.7, 'seed': 2})
    assert again.get_json()['hash'] == response.get_json()['hash']


@pytest.mark.parametrize('body', [None, {'n': 6}, {'n': 'six', 'p': 0.5}, {'n': 1, 'p': 0.5}])
def test_generate_instance_rejects_bad_input(client, body):
    response = client.post('/api/instances', json=body) if body is not None else client.post('/api/instances')
    assert response.status_code == 400
    assert 'error' in response.get_json()


def test_episode_on_fixture(client):
    response = client.post('/api/episodes', json={'policy': 'M', 'seed': 1})
    assert response.status_code == 200
    data = response.get_json()
    assert data['policy'] == 'M'
    assert data['walk'].startswith('1-')
    assert data['seed'] == 1


def test_episode_on_posted_instance(client, line_instance):
    response = client.post('/api/episodes', json={'policy': 'SC:beta=2', 'instance': instance_to_dict(line_instance)})
    assert response.status_code == 200
    assert response.get_json()['policy'] == 'SC:beta=2,V=2E'


@pytest.mark.parametrize('body', [
    {'policy': 'XYZ'},
    {'policy': 'UCB:lambda=-1'},
    {'instance': {'nodes': []}},
    {'seed': 'abc'},
])
def test_episode_rejects_bad_input(client, body):
    assert client.post('/api/episodes', json=body).status_code == 400


def test_oracle_on_fixture(client):
    response = client.post('/api/oracle', json={})
    assert response.status_code == 200
    data = response.get_json()
    assert data['value'] == pytest.approx(219.60, abs=0.01)
    assert data['walk_labels'] == '1-4-1-2-5-3'
    assert data['proven'] is True


def test_sweep_needs_configured_key(client, monkeypatch):
    monkeypatch.delenv('BAYESWALK_ADMIN_API_KEY', raising=False)
    assert client.post('/api/sweeps', json=SMALL_SWEEP).status_code == 500


def test_sweep_authorization(client, monkeypatch):
    monkeypatch.setenv('BAYESWALK_ADMIN_API_KEY', 'secret')
    assert client.post('/api/sweeps', json=SMALL_SWEEP).status_code == 401
    wrong = client.post('/api/sweeps', json=SMALL_SWEEP, headers={'Authorization': 'Bearer nope'})
    assert wrong.status_code == 403

    response = client.post('/api/sweeps', json=SMALL_SWEEP, headers={'Authorization': 'Bearer secret'})
    assert response.status_code == 200
    data = response.get_json()
    assert data['rows'] == 4
    assert data['csv'].startswith('n,p,instance_seed')
    assert {row['params'] for row in data['summary']} == {'M', 'UCB:lambda=1'}


def test_sweep_rejects_bad_design(client, monkeypatch):
    monkeypatch.setenv('BAYESWALK_ADMIN_API_KEY', 'secret')
    response = client.post('/api/sweeps', json={'design': {'replications': 0}},
                           headers={'Authorization': 'Bearer secret'})
    assert response.status_code == 400


def test_unknown_route(client):
    response = client.get('/api/nothing')
    assert response.status_code == 404
    assert response.get_json() == {'error': 'Resource not found'}
