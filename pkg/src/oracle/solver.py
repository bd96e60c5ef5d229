import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional

import networkx as nx

from src.graph import EdgeKey, GraphInstance, NodeId, degree
from src.traversal import walk_total

from .pruning import acyclic_walk_cap, find_bridges, prune_bridge_count, prune_repeated_circuit

TOLERANCE = 1e-9


@dataclass(frozen=True)
class OracleCaps:
    """Search limits of the exact solver"""
    max_expansions: int = 100_000_000
    cyclic_walk_slack: int = 2
    progress_interval: int = 1_000_000

    @classmethod
    def from_config(cls) -> "OracleCaps":
        from src.config import config
        data = config.get_config('system_settings').get('oracle', {})
        return cls(
            max_expansions=int(data.get('max_expansions', cls.max_expansions)),
            cyclic_walk_slack=int(data.get('cyclic_walk_slack', cls.cyclic_walk_slack)),
            progress_interval=int(data.get('progress_interval', cls.progress_interval))
        )


@dataclass
class OracleResult:
    """
    Outcome of the exact search

    proven is False when the expansion cap stopped the search; length_capped is
    True when the cyclic walk-length cap cut off a branch that could still improve.
    """
    value: float
    walk: List[NodeId]
    expansions: int
    proven: bool
    length_capped: bool = False
    max_walk_length: int = 0

    def to_dict(self, instance: Optional[GraphInstance] = None) -> Dict:
        data = {
            'value': round(self.value, 10),
            'walk': list(self.walk),
            'expansions': self.expansions,
            'proven': self.proven,
            'length_capped': self.length_capped,
            'max_walk_length': self.max_walk_length
        }
        if instance is not None:
            data['walk_labels'] = instance.format_walk(self.walk)
        return data


class SearchNode:
    """
    Partial walk from the start with its accounting, extended and retracted in place

    values[-1] always equals the set-based accounting of walk. Collecting a node
    takes a traversal that enters it, so each uncollected node can add at most its
    reward minus its cheapest incident edge (costs are taken to be non-negative).
    """
    def __init__(self, instance: GraphInstance):
        self.instance = instance
        self.walk: List[NodeId] = [instance.start]
        self.visits = Counter({instance.start: 1})
        self.edge_counts: Counter = Counter()
        self.values = [0.0]
        self.potential = [max(0.0, n.true_reward - _cheapest_entry(instance, n.id)) for n in instance.nodes]
        self.remaining = [sum(p for i, p in enumerate(self.potential) if i != instance.start)]

    @property
    def current(self) -> NodeId:
        return self.walk[-1]

    @property
    def visited(self) -> frozenset:
        return frozenset(self.visits)

    @property
    def value(self) -> float:
        return self.values[-1]

    @property
    def upper_bound(self) -> float:
        """Value so far plus the net potential of every node still uncollected"""
        return self.values[-1] + self.remaining[-1]

    def push(self, j: NodeId) -> EdgeKey:
        key = EdgeKey.of(self.current, j)
        value = self.values[-1] - self.instance.edges[key].true_cost
        remaining = self.remaining[-1]
        if self.visits[j] == 0:
            value += self.instance.nodes[j].true_reward
            remaining -= self.potential[j]
        self.visits[j] += 1
        self.edge_counts[key] += 1
        self.walk.append(j)
        self.values.append(value)
        self.remaining.append(remaining)
        return key

    def pop(self) -> None:
        j = self.walk.pop()
        key = EdgeKey.of(self.walk[-1], j)
        self.visits[j] -= 1
        if self.visits[j] == 0:
            del self.visits[j]
        self.edge_counts[key] -= 1
        self.values.pop()
        self.remaining.pop()


def _cheapest_entry(instance: GraphInstance, j: NodeId) -> float:
    costs = [instance.edge(i, j).true_cost for i in instance.neighbors(j) if i != j]
    return max(0.0, min(costs)) if costs else 0.0


def greedy_walk(instance: GraphInstance) -> List[NodeId]:
    """
    Heuristic walk under perfect information

    Repeatedly travels, along cheapest paths, to the uncollected node with the
    largest reward net of the path cost, while that is positive.
    """
    graph = instance.to_networkx()
    for key, edge in instance.edges.items():
        if not key.is_self_loop:
            graph.edges[key.a, key.b]['cost'] = max(0.0, edge.true_cost)

    walk = [instance.start]
    uncollected = {n.id for n in instance.nodes if n.id != instance.start}
    while uncollected:
        distances, paths = nx.single_source_dijkstra(graph, walk[-1], weight='cost')
        gains = {j: instance.nodes[j].true_reward - distances[j] for j in uncollected if j in distances}
        if not gains:
            break
        target = max(sorted(gains), key=gains.get)
        if gains[target] <= 0.0:
            break
        walk.extend(paths[target][1:])
        uncollected.difference_update(paths[target])
    return walk


def clairvoyant_exact(instance: GraphInstance,
                      caps: Optional[OracleCaps] = None,
                      prune: bool = True,
                      allow_return_to_start: bool = True,
                      logger: Optional[logging.Logger] = None) -> OracleResult:
    """
    Best walk from the start under perfect information, by depth-first branch and bound

    A branch is cut when its bound (value plus each uncollected reward net of its
    cheapest incident edge) cannot beat both the incumbent and the value of a
    greedy walk, which serves only as a cutoff. With prune set, bridges are
    crossed at most twice, a circuit is never repeated and, on acyclic graphs,
    walks stop at 2|E| edges with per-node visits capped at twice the degree.
    Otherwise, and on cyclic graphs, walks are capped at 2|E| + slack edges.
    Children are explored in ascending node order and only strict improvements
    replace the incumbent, so the reported walk is the lexicographically
    smallest optimal walk the search keeps.

    Args:
        instance: Instance with truths
        caps: Expansion and length limits (configuration when omitted)
        prune: Apply the structural pruning rules
        allow_return_to_start: When False, no walk re-enters the start node
        logger: Optional logger instance

    Returns:
        OracleResult: The incumbent, flagged unproven if the expansion cap was hit
    """
    logger = logger or logging.getLogger("ORACLE")
    caps = caps or OracleCaps.from_config()

    num_edges = len(instance.non_self_edges())
    acyclic = instance.is_acyclic()
    if prune and acyclic:
        max_length = acyclic_walk_cap(instance)
        visit_caps = [2 * degree(instance, i) for i in range(instance.num_nodes)]
    else:
        max_length = 2 * num_edges + caps.cyclic_walk_slack
        visit_caps = None
    bridges = find_bridges(instance) if prune else frozenset()
    children = [tuple(j for j in instance.neighbors(i)
                      if j != i and (allow_return_to_start or j != instance.start))
                for i in range(instance.num_nodes)]

    node = SearchNode(instance)
    best_value = 0.0
    best_walk = [instance.start]
    seed_walk = greedy_walk(instance) if allow_return_to_start else [instance.start]
    seed_value = walk_total(instance, seed_walk) if len(seed_walk) - 1 <= max_length else 0.0
    floor = max(0.0, seed_value) - 2 * TOLERANCE
    expansions = 0
    proven = True
    capped_bound = float('-inf')
    stack = [iter(children[instance.start])]

    while stack:
        j = next(stack[-1], None)
        if j is None:
            stack.pop()
            if stack:
                node.pop()
            continue
        if expansions >= caps.max_expansions:
            proven = False
            logger.warning(f"Expansion cap {caps.max_expansions} hit on {instance.name}; "
                           f"incumbent {max(best_value, seed_value):.4f}")
            break
        expansions += 1
        if caps.progress_interval and expansions % caps.progress_interval == 0:
            logger.info(f"{instance.name}: {expansions} expansions, incumbent {best_value:.4f}")

        key = node.push(j)
        if prune and (prune_bridge_count(node.edge_counts, bridges, key)
                      or (visit_caps is not None and node.visits[j] > visit_caps[j])
                      or prune_repeated_circuit(node.walk)):
            node.pop()
            continue

        if node.value > best_value + TOLERANCE:
            best_value = node.value
            best_walk = list(node.walk)
        if node.upper_bound > max(best_value, floor) + TOLERANCE:
            if len(node.walk) - 1 < max_length:
                stack.append(iter(children[j]))
                continue
            if not (prune and acyclic):
                capped_bound = max(capped_bound, node.upper_bound)
        node.pop()

    if seed_value > best_value + TOLERANCE:
        # search stopped before it matched the heuristic walk
        best_walk = seed_walk
    value = walk_total(instance, best_walk)
    length_capped = capped_bound > value + TOLERANCE
    logger.info(f"Oracle on {instance.name}: value {value:.4f}, walk {instance.format_walk(best_walk)}, "
                f"{expansions} expansions, proven {proven}")
    return OracleResult(value, best_walk, expansions, proven, length_capped, max_length)
