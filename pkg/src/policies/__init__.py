from .base import Policy, PolicyParams, PolicySpecError, parse_policy_spec, argmax_lowest_id
from .myopic import MyopicPolicy, UcbPolicy, myopic_decide, ucb_decide
from .h_path import (
    EnumerationGuardError,
    PlannedPath,
    HPathPolicy,
    enumerate_paths,
    hp_objective,
    hp_neighborhood_search,
    hp_best_plan,
    hp_decide
)
from .clairvoyant import ClairvoyantPolicy, walk_expected_gain, sc_label_setting, sc_decide, default_walk_cap
from .scripted import ScriptedPolicy
from .factory import make_policy

__all__ = [
    'Policy',
    'PolicyParams',
    'PolicySpecError',
    'parse_policy_spec',
    'argmax_lowest_id',
    'MyopicPolicy',
    'UcbPolicy',
    'myopic_decide',
    'ucb_decide',
    'EnumerationGuardError',
    'PlannedPath',
    'HPathPolicy',
    'enumerate_paths',
    'hp_objective',
    'hp_neighborhood_search',
    'hp_best_plan',
    'hp_decide',
    'ClairvoyantPolicy',
    'walk_expected_gain',
    'sc_label_setting',
    'sc_decide',
    'default_walk_cap',
    'ScriptedPolicy',
    'make_policy'
]
