import itertools
import logging
import math
from dataclasses import replace
from typing import Optional, Tuple

import networkx as nx
import numpy as np

from .instance import Edge, EdgeKey, GraphInstance, Node
from .truth import build_instance, compute_features

logger = logging.getLogger("GRAPH")

FIXTURE_COORDS = [(3, 3), (2, 0), (10, 7), (0, 2), (8, 1)]
FIXTURE_PAIRS = [(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 5), (3, 4), (3, 5)]

HAMILTONIAN_EDGE_COST = 1.0
HAMILTONIAN_NODE_REWARD = 2.0


class GenerationError(RuntimeError):
    """Raised when no connected graph was drawn within the rejection budget"""

    def __init__(self, n: int, p: float, attempts: int):
        self.n = n
        self.p = p
        self.attempts = attempts
        super().__init__(f"No connected G({n}, {p}) graph after {attempts} attempts")


def erdos_renyi(n: int, p: float, rng_seed: int,
                horizon: int = 500,
                max_attempts: int = 100000,
                coord_range: Tuple[float, float] = (0.0, 10.0),
                logger: Optional[logging.Logger] = None) -> GraphInstance:
    """
    Draw a connected G(n, p) instance by rejection sampling whole graphs

    Every unordered pair is included independently with probability p; disconnected
    draws are discarded and the whole graph is redrawn. Coordinates are uniform on
    the coordinate square; features and truths follow the defaults. Node 0 is the start.

    Args:
        n: Number of nodes (>= 2)
        p: Edge probability in (0, 1]
        rng_seed: Seed; identical seeds give identical instances
        horizon: Episode horizon stored on the instance
        max_attempts: Rejection budget
        coord_range: Bounds of the coordinate square
        logger: Optional logger instance

    Returns:
        GraphInstance: The generated instance

    Raises:
        ValueError: If n or p is out of range
        GenerationError: If the rejection budget is exhausted
    """
    logger = logger or logging.getLogger("GRAPH")
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    if not (0 < p <= 1):
        raise ValueError(f"p must be in (0, 1], got {p}")

    rng = np.random.default_rng(rng_seed)
    pairs = list(itertools.combinations(range(n), 2))

    for attempt in range(1, max_attempts + 1):
        draws = rng.random(len(pairs))
        chosen = [pair for pair, u in zip(pairs, draws) if u < p]
        graph = nx.Graph()
        graph.add_nodes_from(range(n))
        graph.add_edges_from(chosen)
        if nx.is_connected(graph):
            if attempt > 1:
                logger.debug(f"G({n}, {p}) seed {rng_seed}: accepted after {attempt} draws")
            low, high = coord_range
            coords = rng.uniform(low, high, size=(n, 2))
            return build_instance(
                [tuple(c) for c in coords], chosen,
                start=0, horizon=horizon,
                name=f"er-n{n}-p{p}-s{rng_seed}"
            )

    logger.error(f"Rejection budget exhausted for G({n}, {p}) seed {rng_seed}")
    raise GenerationError(n, p, max_attempts)


def build_fixture_illustrative(horizon: int = 500) -> GraphInstance:
    """
    The five-node illustrative instance

    Nodes carry labels "1".."5" (ids 0..4); the start is node "1" with its
    reward zeroed and the model value kept as nominal reward.
    """
    pairs = [(a - 1, b - 1) for a, b in FIXTURE_PAIRS]
    return build_instance(
        FIXTURE_COORDS, pairs,
        start=0, horizon=horizon,
        name="illustrative",
        labels=[str(i + 1) for i in range(len(FIXTURE_COORDS))],
        zero_start_reward=True
    )


def hamiltonian_reduction(H: nx.Graph, horizon: int = 500) -> GraphInstance:
    """
    Reduce a Hamiltonian-path question on H to a clairvoyant instance

    A hub node i0 (id 0, the start) joins every node of H with cost-0 edges and
    reward 0; H's edges cost 1 and H's nodes are worth 2. H has a Hamiltonian
    path iff the best walk is worth at least the reduced node count.

    Args:
        H: Connected simple undirected graph

    Returns:
        GraphInstance: The reduced instance

    Raises:
        ValueError: If H is empty, disconnected or has self-loops
    """
    if H.number_of_nodes() == 0:
        raise ValueError("H must have at least one node")
    if nx.number_of_selfloops(H) > 0:
        raise ValueError("H must not contain self-loops")
    if not nx.is_connected(H):
        raise ValueError("H must be connected")

    members = sorted(H.nodes(), key=str)
    index = {v: k + 1 for k, v in enumerate(members)}
    count = len(members)

    nodes = [Node(id=0, coords=(5.0, 5.0), label="i0")]
    for v in members:
        angle = 2 * math.pi * (index[v] - 1) / count
        nodes.append(Node(
            id=index[v],
            coords=(5.0 + 4.0 * math.cos(angle), 5.0 + 4.0 * math.sin(angle)),
            label=str(v)
        ))

    edges = {EdgeKey(i, i): Edge(EdgeKey(i, i)) for i in range(count + 1)}
    for v in members:
        edges[EdgeKey(0, index[v])] = Edge(EdgeKey(0, index[v]))
    for u, v in H.edges():
        key = EdgeKey.of(index[u], index[v])
        edges[key] = Edge(key, true_cost=HAMILTONIAN_EDGE_COST)

    topology = compute_features(GraphInstance(nodes, edges, start=0, horizon=horizon,
                                              name=f"hamiltonian-{count}"))
    rewarded = [replace(n, true_reward=0.0 if n.id == 0 else HAMILTONIAN_NODE_REWARD)
                for n in topology.nodes]
    return GraphInstance(rewarded, topology.edges, start=0, horizon=horizon, name=topology.name)
