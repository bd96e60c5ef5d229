from .instance import (
    NodeId,
    EdgeKey,
    Node,
    Edge,
    GraphInstance,
    InstanceValidationError,
    degree,
    avg_neighbor_degree
)
from .truth import (
    InteractionRewardModel,
    DEFAULT_REWARD_COEFFICIENTS,
    euclidean_cost,
    compute_features,
    default_truth_functions,
    build_instance
)
from .generators import (
    GenerationError,
    erdos_renyi,
    build_fixture_illustrative,
    hamiltonian_reduction
)
from .serialization import instance_to_dict, instance_from_dict, serialize, parse, load_instance, save_instance

__all__ = [
    'NodeId',
    'EdgeKey',
    'Node',
    'Edge',
    'GraphInstance',
    'InstanceValidationError',
    'degree',
    'avg_neighbor_degree',
    'InteractionRewardModel',
    'DEFAULT_REWARD_COEFFICIENTS',
    'euclidean_cost',
    'compute_features',
    'default_truth_functions',
    'build_instance',
    'GenerationError',
    'erdos_renyi',
    'build_fixture_illustrative',
    'hamiltonian_reduction',
    'instance_to_dict',
    'instance_from_dict',
    'serialize',
    'parse',
    'load_instance',
    'save_instance'
]
