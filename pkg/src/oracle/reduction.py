import itertools
import logging
from typing import Optional

import networkx as nx

from src.graph import hamiltonian_reduction

from .solver import OracleCaps, clairvoyant_exact


class IndeterminateResultError(RuntimeError):
    """Raised when the exact search stops at its expansion cap before proving an answer"""


def hamiltonian_decision(H: nx.Graph, caps: Optional[OracleCaps] = None,
                         logger: Optional[logging.Logger] = None) -> bool:
    """
    Decide whether H has a Hamiltonian path by solving its clairvoyant reduction

    The hub is a one-way origin: with free hub edges, returning to it would let a
    walk hop between disconnected parts of H, so returns are disallowed. H then has
    a Hamiltonian path iff the best walk is worth at least the reduced node count.

    Raises:
        IndeterminateResultError: If the search hit its expansion cap
    """
    instance = hamiltonian_reduction(H)
    result = clairvoyant_exact(instance, caps, allow_return_to_start=False, logger=logger)
    if not result.proven:
        raise IndeterminateResultError(
            f"search on {instance.name} stopped after {result.expansions} expansions"
        )
    return result.value >= instance.num_nodes - 1e-9


def has_hamiltonian_path(H: nx.Graph) -> bool:
    """Brute-force check over all node orderings"""
    members = list(H.nodes())
    if len(members) <= 1:
        return True
    return any(all(H.has_edge(u, v) for u, v in zip(order, order[1:]))
               for order in itertools.permutations(members))
