import json
from dataclasses import replace
from typing import Any, Dict, List

from .instance import Edge, EdgeKey, GraphInstance, InstanceValidationError, Node
from .truth import InteractionRewardModel, edge_features, euclidean_cost, node_features


def instance_to_dict(instance: GraphInstance) -> Dict[str, Any]:
    """Canonical document for an instance (fixed field order)"""
    nodes = []
    for node in instance.nodes:
        entry: Dict[str, Any] = {'id': node.id}
        if node.label is not None:
            entry['label'] = node.label
        entry['coords'] = [float(c) for c in node.coords]
        entry['features'] = [float(f) for f in node.features]
        entry['reward'] = float(node.true_reward)
        if node.nominal_reward is not None:
            entry['nominal_reward'] = float(node.nominal_reward)
        nodes.append(entry)

    edges = [
        {
            'a': key.a,
            'b': key.b,
            'features': [float(f) for f in edge.features],
            'cost': float(edge.true_cost)
        }
        for key, edge in instance.edges.items()
    ]
    return {
        'name': instance.name,
        'nodes': nodes,
        'edges': edges,
        'start': instance.start,
        'horizon': instance.horizon
    }


def serialize(instance: GraphInstance) -> str:
    """Serialize an instance to its canonical JSON text"""
    return json.dumps(instance_to_dict(instance), indent=2) + "\n"


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _require(entry: Dict[str, Any], key: str, where: str) -> Any:
    if not isinstance(entry, dict) or key not in entry:
        raise InstanceValidationError(f"{where}.{key}", "missing required field")
    return entry[key]


def _number_list(value: Any, where: str, length: int = -1) -> List[float]:
    if not isinstance(value, list) or not all(_is_number(v) for v in value):
        raise InstanceValidationError(where, "expected a list of numbers")
    if length >= 0 and len(value) != length:
        raise InstanceValidationError(where, f"expected {length} values, got {len(value)}")
    return [float(v) for v in value]


def instance_from_dict(document: Dict[str, Any]) -> GraphInstance:
    """
    Build an instance from a parsed document

    Missing features, rewards and costs are computed with the default conventions.
    A start reward of 0 without a nominal reward is read as a zeroed start: the
    reward model's value becomes its nominal reward.

    Raises:
        InstanceValidationError: On schema violations (naming the field), a missing
            self-loop, or a disconnected graph
    """
    if not isinstance(document, dict):
        raise InstanceValidationError("document", "expected a JSON object")
    raw_nodes = _require(document, 'nodes', 'document')
    raw_edges = _require(document, 'edges', 'document')
    if not isinstance(raw_nodes, list) or not raw_nodes:
        raise InstanceValidationError("nodes", "expected a non-empty array")
    if not isinstance(raw_edges, list):
        raise InstanceValidationError("edges", "expected an array")

    nodes: List[Node] = []
    for position, entry in enumerate(raw_nodes):
        where = f"nodes[{position}]"
        node_id = _require(entry, 'id', where)
        if not isinstance(node_id, int) or isinstance(node_id, bool):
            raise InstanceValidationError(f"{where}.id", "expected an integer")
        coords = _number_list(_require(entry, 'coords', where), f"{where}.coords", 2)
        features = _number_list(entry.get('features', []), f"{where}.features")
        reward = entry.get('reward')
        if reward is not None and not _is_number(reward):
            raise InstanceValidationError(f"{where}.reward", "expected a number")
        nominal = entry.get('nominal_reward')
        if nominal is not None and not _is_number(nominal):
            raise InstanceValidationError(f"{where}.nominal_reward", "expected a number")
        label = entry.get('label')
        nodes.append(Node(
            id=node_id,
            coords=(coords[0], coords[1]),
            features=tuple(features),
            true_reward=float(reward) if reward is not None else float('nan'),
            nominal_reward=float(nominal) if nominal is not None else None,
            label=str(label) if label is not None else None
        ))
    nodes.sort(key=lambda n: n.id)

    edges: Dict[EdgeKey, Edge] = {}
    missing_costs = set()
    for position, entry in enumerate(raw_edges):
        where = f"edges[{position}]"
        a = _require(entry, 'a', where)
        b = _require(entry, 'b', where)
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (a, b)):
            raise InstanceValidationError(f"{where}.a/b", "expected integer node ids")
        key = EdgeKey.of(a, b)
        if key in edges:
            raise InstanceValidationError(where, f"duplicate edge {key}")
        features = _number_list(entry.get('features', []), f"{where}.features")
        cost = entry.get('cost')
        if cost is None:
            missing_costs.add(key)
        elif not _is_number(cost):
            raise InstanceValidationError(f"{where}.cost", "expected a number")
        elif key.is_self_loop and cost != 0:
            raise InstanceValidationError(f"{where}.cost", "self-loop cost must be 0")
        edges[key] = Edge(key, tuple(features), float(cost) if cost is not None else 0.0)

    start = document.get('start', 0)
    horizon = document.get('horizon', 500)
    if not isinstance(start, int) or not isinstance(horizon, int):
        raise InstanceValidationError("start/horizon", "expected integers")
    name = str(document.get('name', 'instance'))

    instance = GraphInstance(nodes, edges, start, horizon, name)
    return _fill_defaults(instance, missing_costs)


def _fill_defaults(instance: GraphInstance, missing_costs: set) -> GraphInstance:
    reward_model = InteractionRewardModel()
    nodes = []
    for node in instance.nodes:
        features = node.features or node_features(instance, node.id)
        reward = node.true_reward
        nominal = node.nominal_reward
        if reward != reward:  # NaN marks an absent reward
            reward = float(reward_model(features))
        elif node.id == instance.start and reward == 0.0 and nominal is None and len(features) >= 2:
            nominal = float(reward_model(features))
        nodes.append(replace(node, features=tuple(features), true_reward=reward, nominal_reward=nominal))

    edges = {}
    for key, edge in instance.edges.items():
        features = edge.features or edge_features(instance, key)
        cost = edge.true_cost
        if key in missing_costs and not key.is_self_loop:
            cost = euclidean_cost(instance.nodes[key.a].coords, instance.nodes[key.b].coords)
        edges[key] = replace(edge, features=tuple(features), true_cost=cost)

    return GraphInstance(nodes, edges, instance.start, instance.horizon, instance.name)


def parse(text: str) -> GraphInstance:
    """
    Parse an instance document

    Raises:
        InstanceValidationError: On malformed JSON or any schema/invariant violation
    """
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceValidationError("document", f"invalid JSON: {e}") from e
    return instance_from_dict(document)


def load_instance(path: str) -> GraphInstance:
    with open(path, 'r', encoding='utf-8') as f:
        return parse(f.read())


def save_instance(instance: GraphInstance, path: str) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        f.write(serialize(instance))
