from dataclasses import dataclass
from typing import FrozenSet, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from src.graph import EdgeKey, GraphInstance, NodeId


class CyclicInstanceError(ValueError):
    """Raised when an acyclic-only bound is requested on a graph with cycles"""


def find_bridges(instance: GraphInstance) -> FrozenSet[EdgeKey]:
    """Bridges of the instance graph; self-loops are never bridges"""
    graph = instance.to_networkx()
    graph.remove_edges_from(nx.selfloop_edges(graph))
    return frozenset(EdgeKey.of(a, b) for a, b in nx.bridges(graph))


def _steps(walk: Sequence[NodeId]) -> List[NodeId]:
    """The walk without consecutive repeats (stays)"""
    out: List[NodeId] = []
    for i in walk:
        if not out or out[-1] != i:
            out.append(i)
    return out


def _edge_keys(walk: Sequence[NodeId]) -> List[EdgeKey]:
    return [EdgeKey.of(u, v) for u, v in zip(walk, walk[1:])]


def _is_circuit(edges: Sequence[EdgeKey], k: int, m: int) -> bool:
    window = edges[k:m]
    return len(window) >= 3 and len(set(window)) == len(window)


def prune_repeated_circuit(walk: Sequence[NodeId]) -> bool:
    """
    True when the walk just closed a circuit that it already traversed

    The most recent closed window (back to the previous visit of the current node)
    is compared with every earlier closed window at the same node; a circuit has
    no repeated edge, so a-b-a-b never qualifies.
    """
    walk = _steps(walk)
    m = len(walk) - 1
    if m < 3:
        return False
    end = walk[m]
    positions = [p for p in range(m) if walk[p] == end]
    if not positions:
        return False
    edges = _edge_keys(walk)
    k = positions[-1]
    if not _is_circuit(edges, k, m):
        return False
    latest = frozenset(edges[k:m])
    for b_idx, b in enumerate(positions):
        if b > k:
            break
        for a in positions[:b_idx]:
            if _is_circuit(edges, a, b) and frozenset(edges[a:b]) == latest:
                return True
    return False


def prune_bridge_count(edge_counts: Mapping[EdgeKey, int], bridges: FrozenSet[EdgeKey],
                       key: Optional[EdgeKey] = None) -> bool:
    """
    True when a bridge has been traversed more than twice

    Args:
        edge_counts: Traversal count per edge
        bridges: Precomputed bridge set
        key: When given, only this (just traversed) edge is checked
    """
    if key is not None:
        return key in bridges and edge_counts.get(key, 0) > 2
    return any(edge_counts.get(b, 0) > 2 for b in bridges)


def acyclic_walk_cap(instance: GraphInstance) -> int:
    """
    Length bound 2|E| (non-self edges) on optimal walks of an acyclic instance

    Raises:
        CyclicInstanceError: If the graph has a cycle other than self-loops
    """
    if not instance.is_acyclic():
        raise CyclicInstanceError(f"instance {instance.name} has cycles")
    return 2 * len(instance.non_self_edges())


@dataclass(frozen=True)
class CircuitViolation:
    """Two circuits in a walk at one endpoint where the first's nodes lie within the second's"""
    endpoint: NodeId
    smaller: Tuple[int, int]
    larger: Tuple[int, int]


def dominated_circuit_check(walk: Sequence[NodeId], instance: Optional[GraphInstance] = None) -> List[CircuitViolation]:
    """
    Audit a walk for dominated circuits

    Circuits are closed windows of the walk without repeated edges. Two circuits
    that do not overlap in time, end at the same node and have distinct edge sets
    are a violation when one's node set is contained in the other's: skipping the
    smaller one loses no reward.

    Returns:
        List[CircuitViolation]: Windows given as (first, last) walk positions
    """
    walk = _steps(walk)
    if instance is not None:
        for u, v in zip(walk, walk[1:]):
            if not instance.is_adjacent(u, v):
                raise ValueError(f"walk moves between non-adjacent nodes {u} and {v}")

    edges = _edge_keys(walk)
    circuits = []
    for k in range(len(walk)):
        for m in range(k + 3, len(walk)):
            if walk[m] == walk[k] and _is_circuit(edges, k, m):
                circuits.append((k, m, frozenset(walk[k:m + 1]), frozenset(edges[k:m])))

    violations = []
    for idx, (k1, m1, nodes1, edges1) in enumerate(circuits):
        for k2, m2, nodes2, edges2 in circuits[idx + 1:]:
            if walk[k1] != walk[k2] or edges1 == edges2:
                continue
            if m1 > k2 and m2 > k1:
                continue
            if nodes1 <= nodes2:
                violations.append(CircuitViolation(walk[k1], (k1, m1), (k2, m2)))
            elif nodes2 <= nodes1:
                violations.append(CircuitViolation(walk[k1], (k2, m2), (k1, m1)))
    return violations
