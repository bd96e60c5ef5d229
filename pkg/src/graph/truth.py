import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Tuple

from .instance import Edge, EdgeKey, GraphInstance, Node, avg_neighbor_degree, degree

# Interaction-model coefficients fitted exactly to the three distinct
# (degree, avg neighbor degree) -> reward points of the illustrative fixture
DEFAULT_REWARD_COEFFICIENTS = (64.0 / 15.0, 1.0, 34.0 / 15.0)

RewardFunction = Callable[[Sequence[float]], float]
CostFunction = Callable[[Sequence[float], Sequence[float]], float]


@dataclass(frozen=True)
class InteractionRewardModel:
    """
    Second-order interaction reward: t1*d + t2*a + t3*d*a

    d is the node degree and a the average neighbor degree (the first two node features).
    """
    coefficients: Tuple[float, float, float] = DEFAULT_REWARD_COEFFICIENTS

    def __call__(self, features: Sequence[float]) -> float:
        d, a = features[0], features[1]
        t1, t2, t3 = self.coefficients
        return t1 * d + t2 * a + t3 * d * a


def euclidean_cost(a: Sequence[float], b: Sequence[float]) -> float:
    """Euclidean distance between two endpoint coordinates"""
    return math.dist(a, b)


def node_features(instance: GraphInstance, i: int) -> Tuple[float, float]:
    return (float(degree(instance, i)), avg_neighbor_degree(instance, i))


def edge_features(instance: GraphInstance, key: EdgeKey) -> Tuple[float, ...]:
    """Endpoint coordinates concatenated in canonical key order"""
    return tuple(instance.nodes[key.a].coords) + tuple(instance.nodes[key.b].coords)


def compute_features(instance: GraphInstance) -> GraphInstance:
    """Populate node and edge features from topology and coordinates"""
    nodes = [replace(n, features=node_features(instance, n.id)) for n in instance.nodes]
    edges = {k: replace(e, features=edge_features(instance, k)) for k, e in instance.edges.items()}
    return GraphInstance(nodes, edges, instance.start, instance.horizon, instance.name)


def default_truth_functions(instance: GraphInstance,
                            reward_model: Optional[RewardFunction] = None,
                            cost_model: Optional[CostFunction] = None,
                            zero_start_reward: bool = False) -> GraphInstance:
    """
    Populate true rewards and costs from the covariates

    Args:
        instance: Instance with coordinates and node features populated
        reward_model: Reward as a function of node features (default interaction model)
        cost_model: Cost as a function of endpoint coordinates (default Euclidean distance)
        zero_start_reward: Zero the start node's true reward, keeping the model value
            as its nominal reward

    Returns:
        GraphInstance: New instance with true_reward/true_cost populated
    """
    reward_model = reward_model or InteractionRewardModel()
    cost_model = cost_model or euclidean_cost

    nodes = []
    for node in instance.nodes:
        value = float(reward_model(node.features))
        if zero_start_reward and node.id == instance.start:
            nodes.append(replace(node, true_reward=0.0, nominal_reward=value))
        else:
            nodes.append(replace(node, true_reward=value, nominal_reward=None))

    edges = {}
    for key, edge in instance.edges.items():
        if key.is_self_loop:
            cost = 0.0
        else:
            cost = float(cost_model(instance.nodes[key.a].coords, instance.nodes[key.b].coords))
        edges[key] = replace(edge, true_cost=cost)

    return GraphInstance(nodes, edges, instance.start, instance.horizon, instance.name)


def build_instance(coords: Sequence[Tuple[float, float]],
                   pairs: Sequence[Tuple[int, int]],
                   start: int = 0,
                   horizon: int = 500,
                   name: str = "instance",
                   labels: Optional[Sequence[str]] = None,
                   zero_start_reward: bool = False) -> GraphInstance:
    """
    Build an instance from coordinates and undirected pairs using the default conventions

    Self-loops are added for every node; features and truths come from the defaults.
    """
    nodes = [
        Node(id=i, coords=(float(x), float(y)), label=labels[i] if labels else None)
        for i, (x, y) in enumerate(coords)
    ]
    edges = {EdgeKey(i, i): Edge(EdgeKey(i, i)) for i in range(len(nodes))}
    for i, j in pairs:
        key = EdgeKey.of(i, j)
        edges[key] = Edge(key)
    topology = GraphInstance(nodes, edges, start, horizon, name)
    return default_truth_functions(compute_features(topology), zero_start_reward=zero_start_reward)
