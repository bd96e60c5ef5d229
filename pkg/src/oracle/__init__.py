from .pruning import (
    CyclicInstanceError,
    CircuitViolation,
    find_bridges,
    prune_repeated_circuit,
    prune_bridge_count,
    acyclic_walk_cap,
    dominated_circuit_check
)
from .solver import OracleCaps, OracleResult, SearchNode, clairvoyant_exact, greedy_walk
from .reduction import IndeterminateResultError, hamiltonian_decision, has_hamiltonian_path

__all__ = [
    'CyclicInstanceError',
    'CircuitViolation',
    'find_bridges',
    'prune_repeated_circuit',
    'prune_bridge_count',
    'acyclic_walk_cap',
    'dominated_circuit_check',
    'OracleCaps',
    'OracleResult',
    'SearchNode',
    'clairvoyant_exact',
    'greedy_walk',
    'IndeterminateResultError',
    'hamiltonian_decision',
    'has_hamiltonian_path'
]
