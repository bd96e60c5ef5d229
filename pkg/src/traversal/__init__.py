from .state import (
    NonAdjacentMoveError,
    InstanceView,
    TravelerState,
    PolicyContext,
    StepRecord,
    EpisodeLog
)
from .gains import realized_net_gain, expected_net_gain, net_gain_variance, transition
from .engine import epoch_rng, initial_state, run_episode, walk_total, total_contribution

__all__ = [
    'NonAdjacentMoveError',
    'InstanceView',
    'TravelerState',
    'PolicyContext',
    'StepRecord',
    'EpisodeLog',
    'realized_net_gain',
    'expected_net_gain',
    'net_gain_variance',
    'transition',
    'epoch_rng',
    'initial_state',
    'run_episode',
    'walk_total',
    'total_contribution'
]
