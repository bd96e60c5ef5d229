import csv
import io
import json
from dataclasses import dataclass, field, asdict
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from src.belief import BeliefState
from src.graph import EdgeKey, GraphInstance, NodeId


class NonAdjacentMoveError(ValueError):
    """Raised when a move targets a node that is neither i_t nor one of its neighbors"""

    def __init__(self, current: NodeId, target: NodeId):
        self.current = current
        self.target = target
        super().__init__(f"node {target} is not adjacent to {current}")


class InstanceView:
    """
    Topology and covariates of an instance, without any hidden truth

    The view copies what a traveler may know; it holds no reference to the instance.
    """
    def __init__(self, instance: GraphInstance):
        self.name = instance.name
        self.num_nodes = instance.num_nodes
        self.start = instance.start
        self.adjacency: Tuple[Tuple[NodeId, ...], ...] = instance.adjacency
        self.coords = tuple(n.coords for n in instance.nodes)
        self.labels = tuple(n.display for n in instance.nodes)
        self.node_features = tuple(n.features for n in instance.nodes)
        self.edge_features: Dict[EdgeKey, Tuple[float, ...]] = {k: e.features for k, e in instance.edges.items()}
        self.edge_keys: Tuple[EdgeKey, ...] = tuple(self.edge_features)
        self.edge_index = {k: idx for idx, k in enumerate(self.edge_keys)}

    def neighbors(self, i: NodeId) -> Tuple[NodeId, ...]:
        return self.adjacency[i]

    def is_adjacent(self, i: NodeId, j: NodeId) -> bool:
        return EdgeKey.of(i, j) in self.edge_features

    def check_move(self, i: NodeId, j: NodeId) -> EdgeKey:
        key = EdgeKey.of(i, j)
        if key not in self.edge_features:
            raise NonAdjacentMoveError(i, j)
        return key

    def format_walk(self, walk) -> str:
        return "-".join(self.labels[i] for i in walk)


@dataclass(frozen=True)
class TravelerState:
    """The traveler's state: position, visited set and beliefs (which hold the observation sets)"""
    current: NodeId
    visited: FrozenSet[NodeId]
    belief: BeliefState
    step: int = 0


class PolicyContext:
    """
    What a policy sees at a decision epoch: the truth-free view and the traveler state

    Posterior means and variances over all nodes and edges are computed lazily once
    per context; observed inputs use their recorded values exactly.
    """
    def __init__(self, view: InstanceView, state: TravelerState):
        self.view = view
        self.state = state

    @property
    def current(self) -> NodeId:
        return self.state.current

    @property
    def visited(self) -> FrozenSet[NodeId]:
        return self.state.visited

    @cached_property
    def reward_means(self) -> np.ndarray:
        belief = self.state.belief
        means = belief.reward_process.means(self.view.node_features)
        for j, y in enumerate(self.view.node_features):
            observed = belief.reward_obs.value_of(y)
            if observed is not None:
                means[j] = observed
        return means

    @cached_property
    def reward_variances(self) -> np.ndarray:
        belief = self.state.belief
        variances = belief.reward_process.variances(self.view.node_features)
        for j, y in enumerate(self.view.node_features):
            if y in belief.reward_obs:
                variances[j] = 0.0
        return variances

    @cached_property
    def cost_means(self) -> np.ndarray:
        belief = self.state.belief
        feats = [self.view.edge_features[k] for k in self.view.edge_keys]
        means = belief.cost_process.means(feats)
        for idx, key in enumerate(self.view.edge_keys):
            if key.is_self_loop:
                means[idx] = 0.0
                continue
            observed = belief.cost_obs.value_of(feats[idx])
            if observed is not None:
                means[idx] = observed
        return means

    @cached_property
    def cost_variances(self) -> np.ndarray:
        belief = self.state.belief
        feats = [self.view.edge_features[k] for k in self.view.edge_keys]
        variances = belief.cost_process.variances(feats)
        for idx, key in enumerate(self.view.edge_keys):
            if key.is_self_loop or feats[idx] in belief.cost_obs:
                variances[idx] = 0.0
        return variances

    def cost_mean(self, i: NodeId, j: NodeId) -> float:
        return float(self.cost_means[self.view.edge_index[EdgeKey.of(i, j)]])

    def cost_variance(self, i: NodeId, j: NodeId) -> float:
        return float(self.cost_variances[self.view.edge_index[EdgeKey.of(i, j)]])

    def reward_mean(self, j: NodeId) -> float:
        return float(self.reward_means[j])

    def reward_variance(self, j: NodeId) -> float:
        return float(self.reward_variances[j])

    def node_observed(self, j: NodeId) -> bool:
        return self.view.node_features[j] in self.state.belief.reward_obs

    def edge_observed(self, i: NodeId, j: NodeId) -> bool:
        key = EdgeKey.of(i, j)
        return key.is_self_loop or self.view.edge_features[key] in self.state.belief.cost_obs


@dataclass(frozen=True)
class StepRecord:
    """One decision epoch: the move made, its realized gain and any new observations"""
    t: int
    source: NodeId
    target: NodeId
    realized_gain: float
    observed_cost: Optional[float] = None
    observed_reward: Optional[float] = None


@dataclass
class EpisodeLog:
    """Ordered step records of one episode"""
    instance_id: str
    policy: str
    seed: int
    start: NodeId
    records: List[StepRecord] = field(default_factory=list)
    total: float = 0.0
    fault: Optional[str] = None

    @property
    def steps(self) -> int:
        return len(self.records)

    @property
    def walk(self) -> List[NodeId]:
        """Visited node sequence from the start, self-loop stops excluded"""
        nodes = [self.start]
        for record in self.records:
            if record.target != record.source:
                nodes.append(record.target)
        return nodes

    @property
    def decisions(self) -> List[NodeId]:
        return [r.target for r in self.records]

    def to_dict(self) -> Dict:
        return {
            'instance_id': self.instance_id,
            'policy': self.policy,
            'seed': self.seed,
            'start': self.start,
            'total': self.total,
            'steps': self.steps,
            'fault': self.fault,
            'records': [asdict(r) for r in self.records]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def csv_summary(self) -> str:
        """One-line CSV: instance id, policy, seed, steps, total"""
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator="\n").writerow(
            [self.instance_id, self.policy, self.seed, self.steps, f"{self.total:.6f}"]
        )
        return buffer.getvalue()
