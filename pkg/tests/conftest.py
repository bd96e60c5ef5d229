import os
import tempfile

# Logs go to a scratch directory; must be set before src.config is imported
os.environ.setdefault('BAYESWALK_LOG_DIR', tempfile.mkdtemp(prefix='bayeswalk-logs-'))

import pytest

from src.belief import BeliefSettings
from src.graph import build_fixture_illustrative, build_instance, erdos_renyi
from src.traversal import InstanceView, PolicyContext, initial_state

ENUMERATION = {'max_horizon': 6, 'max_nodes': 12}


def context_at_start(instance, settings=None):
    """Decision context at t=0"""
    return PolicyContext(InstanceView(instance), initial_state(instance, settings or BeliefSettings()))


def walk_of(instance, text):
    return instance.resolve_walk(text.split('-'))


def random_instances(count, sizes=(4, 5, 6), probabilities=(0.4, 0.8), seed=0):
    """Small connected G(n, p) instances cycling through the given sizes and probabilities"""
    out = []
    for k in range(count):
        n = sizes[k % len(sizes)]
        p = probabilities[(k // len(sizes)) % len(probabilities)]
        out.append(erdos_renyi(n, p, seed + k))
    return out


@pytest.fixture(scope='session')
def fixture_instance():
    return build_fixture_illustrative()


@pytest.fixture
def line_instance():
    """a-b-c on unit spacing"""
    return build_instance([(0, 0), (1, 0), (2, 0)], [(0, 1), (1, 2)], name='line')


@pytest.fixture
def star_instance():
    """Center 0 with three leaves at distance 1"""
    return build_instance([(0, 0), (1, 0), (0, 1), (-1, 0)], [(0, 1), (0, 2), (0, 3)], name='star')
