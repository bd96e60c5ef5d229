from .kernel import Kernel, GpPrior
from .gaussian_process import (
    ObservationSet,
    ObservationConflictError,
    FactorizationError,
    PosteriorSummary,
    ConditionedProcess,
    add_observation,
    posterior_marginal,
    posterior_joint,
    generalized_variance
)
from .belief_state import BeliefSettings, BeliefState, reward_grand_mean, cost_grand_mean

__all__ = [
    'Kernel',
    'GpPrior',
    'ObservationSet',
    'ObservationConflictError',
    'FactorizationError',
    'PosteriorSummary',
    'ConditionedProcess',
    'add_observation',
    'posterior_marginal',
    'posterior_joint',
    'generalized_variance',
    'BeliefSettings',
    'BeliefState',
    'reward_grand_mean',
    'cost_grand_mean'
]
