import hashlib
import numbers
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

NodeId = int

logger = logging.getLogger("GRAPH")


class InstanceValidationError(ValueError):
    """Raised when an instance or instance document violates the schema or a graph invariant"""

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


@dataclass(frozen=True, order=True)
class EdgeKey:
    """Undirected edge key; (i, j) and (j, i) resolve to the same key"""
    a: NodeId
    b: NodeId

    def __post_init__(self):
        if self.a > self.b:
            raise ValueError(f"EdgeKey must be canonical (a <= b), got ({self.a}, {self.b})")

    @classmethod
    def of(cls, i: NodeId, j: NodeId) -> "EdgeKey":
        return cls(min(i, j), max(i, j))

    @property
    def is_self_loop(self) -> bool:
        return self.a == self.b

    def other(self, i: NodeId) -> NodeId:
        """Endpoint opposite to i"""
        if i == self.a:
            return self.b
        if i == self.b:
            return self.a
        raise ValueError(f"Node {i} is not an endpoint of {self}")

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


@dataclass(frozen=True)
class Node:
    """
    A graph node with its covariates and hidden reward

    nominal_reward holds the reward model's value when true_reward was zeroed
    (the start node of the illustrative fixture); None otherwise.
    """
    id: NodeId
    coords: Tuple[float, float]
    features: Tuple[float, ...] = ()
    true_reward: float = 0.0
    nominal_reward: Optional[float] = None
    label: Optional[str] = None

    @property
    def prior_reward(self) -> float:
        return self.true_reward if self.nominal_reward is None else self.nominal_reward

    @property
    def display(self) -> str:
        return self.label if self.label is not None else str(self.id)


@dataclass(frozen=True)
class Edge:
    """An undirected edge with its covariates and hidden traversal cost"""
    key: EdgeKey
    features: Tuple[float, ...] = ()
    true_cost: float = 0.0


@dataclass(frozen=True, eq=False)
class GraphInstance:
    """
    Known topology with covariates and hidden ground truth

    Instances are immutable after construction and are validated on creation:
    node ids are dense, every node has a self-loop, and the graph is connected
    ignoring self-loops.
    """
    nodes: Tuple[Node, ...]
    edges: Dict[EdgeKey, Edge]
    start: NodeId = 0
    horizon: int = 500
    name: str = "instance"
    adjacency: Tuple[Tuple[NodeId, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, 'nodes', tuple(self.nodes))
        object.__setattr__(self, 'edges', dict(sorted(self.edges.items())))
        self._validate()
        neighbors: List[List[NodeId]] = [[] for _ in self.nodes]
        for key in self.edges:
            neighbors[key.a].append(key.b)
            if not key.is_self_loop:
                neighbors[key.b].append(key.a)
        object.__setattr__(self, 'adjacency', tuple(tuple(sorted(n)) for n in neighbors))

    def _validate(self) -> None:
        n = len(self.nodes)
        if n == 0:
            raise InstanceValidationError("nodes", "instance has no nodes")
        for index, node in enumerate(self.nodes):
            if node.id != index:
                raise InstanceValidationError("nodes.id", f"ids must be dense 0..{n - 1}, found {node.id} at position {index}")
        for key, edge in self.edges.items():
            if edge.key != key:
                raise InstanceValidationError("edges", f"edge stored under {key} carries key {edge.key}")
            if key.b >= n or key.a < 0:
                raise InstanceValidationError("edges", f"edge {key} references an unknown node")
        for node in self.nodes:
            if EdgeKey(node.id, node.id) not in self.edges:
                raise InstanceValidationError("edges", f"missing self-loop for node {node.id}")
        if not (0 <= self.start < n):
            raise InstanceValidationError("start", f"unknown start node {self.start}")
        if self.horizon < 1:
            raise InstanceValidationError("horizon", f"horizon must be positive, got {self.horizon}")
        if not nx.is_connected(self.to_networkx()):
            raise InstanceValidationError("edges", "graph is not connected")

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphInstance):
            return NotImplemented
        return (self.nodes == other.nodes and self.edges == other.edges
                and self.start == other.start and self.horizon == other.horizon)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    def node(self, i: NodeId) -> Node:
        self.check_node(i)
        return self.nodes[i]

    def check_node(self, i: NodeId) -> None:
        if not isinstance(i, numbers.Integral) or not (0 <= i < len(self.nodes)):
            raise InstanceValidationError("node", f"unknown node id {i}")

    def neighbors(self, i: NodeId) -> Tuple[NodeId, ...]:
        """Neighbors of i, including i itself, in ascending id order"""
        self.check_node(i)
        return self.adjacency[i]

    def is_adjacent(self, i: NodeId, j: NodeId) -> bool:
        return EdgeKey.of(i, j) in self.edges

    def edge(self, i: NodeId, j: NodeId) -> Edge:
        return self.edges[EdgeKey.of(i, j)]

    def non_self_edges(self) -> List[Edge]:
        return [e for k, e in self.edges.items() if not k.is_self_loop]

    def to_networkx(self) -> nx.Graph:
        """Topology as a networkx graph without self-loops"""
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.nodes)))
        graph.add_edges_from((k.a, k.b) for k in self.edges if not k.is_self_loop)
        return graph

    def is_acyclic(self) -> bool:
        return nx.is_forest(self.to_networkx())

    def resolve_walk(self, labels: Sequence) -> List[NodeId]:
        """Map a sequence of node labels (or ids) to node ids"""
        by_label = {node.display: node.id for node in self.nodes}
        walk = []
        for item in labels:
            key = str(item)
            if key not in by_label:
                raise InstanceValidationError("walk", f"unknown node label {item}")
            walk.append(by_label[key])
        return walk

    def format_walk(self, walk: Iterable[NodeId]) -> str:
        return "-".join(self.nodes[i].display for i in walk)

    def with_truths(self, rewards: Optional[Dict[NodeId, float]] = None,
                    costs: Optional[Dict[EdgeKey, float]] = None) -> "GraphInstance":
        """Copy of the instance with some hidden truths replaced"""
        rewards = rewards or {}
        costs = costs or {}
        nodes = [replace(n, true_reward=rewards[n.id], nominal_reward=None) if n.id in rewards else n
                 for n in self.nodes]
        edges = {k: replace(e, true_cost=costs[k]) if k in costs else e for k, e in self.edges.items()}
        return GraphInstance(nodes, edges, self.start, self.horizon, self.name)

    def instance_hash(self) -> str:
        """Short content hash, stable across processes"""
        from .serialization import serialize
        return hashlib.sha256(serialize(self).encode('utf-8')).hexdigest()[:16]


def degree(instance: GraphInstance, i: NodeId) -> int:
    """
    Number of distinct neighbors of i, counting the self-loop exactly once

    Raises:
        InstanceValidationError: If i is not a node of the instance
    """
    return len(instance.neighbors(i))


def avg_neighbor_degree(instance: GraphInstance, i: NodeId) -> float:
    """
    Mean degree over the neighbor multiset of i

    The self-loop contributes i twice, every other neighbor once.

    Raises:
        InstanceValidationError: If i is not a node of the instance
    """
    others = [j for j in instance.neighbors(i) if j != i]
    own = degree(instance, i)
    total = sum(degree(instance, j) for j in others) + 2 * own
    return total / (len(others) + 2)
