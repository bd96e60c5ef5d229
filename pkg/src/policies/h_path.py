import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.belief import ConditionedProcess, generalized_variance
from src.graph import NodeId
from src.traversal import PolicyContext

from .base import Policy, argmax_lowest_id

DEFAULT_RESTARTS = 10


class EnumerationGuardError(ValueError):
    """Raised when exhaustive plan enumeration is requested on a problem that is too large"""

    def __init__(self, horizon: int, num_nodes: int, max_horizon: int, max_nodes: int):
        self.horizon = horizon
        self.num_nodes = num_nodes
        super().__init__(
            f"exhaustive enumeration needs H <= {max_horizon} or at most {max_nodes} nodes "
            f"(got H={horizon}, {num_nodes} nodes)"
        )


@dataclass(frozen=True)
class PlannedPath:
    """
    An H-step plan from the current node

    nodes holds H+1 entries starting at the current node; a plan that stops
    before H steps is padded with trailing self-loops.
    """
    nodes: Tuple[NodeId, ...]
    value: float = 0.0
    history: Tuple[float, ...] = ()

    @property
    def first_step(self) -> NodeId:
        return self.nodes[1] if len(self.nodes) > 1 else self.nodes[0]

    @property
    def horizon(self) -> int:
        return len(self.nodes) - 1

    @property
    def real_nodes(self) -> Tuple[NodeId, ...]:
        """The plan with its self-loop padding removed"""
        end = len(self.nodes)
        while end > 1 and self.nodes[end - 1] == self.nodes[end - 2]:
            end -= 1
        return self.nodes[:end]

    @property
    def is_stay(self) -> bool:
        return len(self.real_nodes) == 1


def _pad(path: Sequence[NodeId], horizon: int) -> Tuple[NodeId, ...]:
    return tuple(path) + (path[-1],) * (horizon + 1 - len(path))


def _extensions(ctx: PolicyContext, path: Sequence[NodeId]) -> List[NodeId]:
    return [j for j in ctx.view.neighbors(path[-1]) if j not in path]


def enumerate_paths(ctx: PolicyContext, horizon: int,
                    max_horizon: int = 6, max_nodes: int = 12) -> List[Tuple[NodeId, ...]]:
    """
    All feasible plans of at most H steps from the current node, plus the stay plan

    Any prefix of a branch may stop there; stopped plans are padded with self-loops.

    Raises:
        EnumerationGuardError: If H > max_horizon and the graph has more than max_nodes nodes
    """
    if horizon < 1:
        raise ValueError(f"H must be at least 1, got {horizon}")
    if horizon > max_horizon and ctx.view.num_nodes > max_nodes:
        raise EnumerationGuardError(horizon, ctx.view.num_nodes, max_horizon, max_nodes)

    plans = [_pad([ctx.current], horizon)]

    def extend(path: List[NodeId]) -> None:
        if len(path) > 1:
            plans.append(_pad(path, horizon))
        if len(path) == horizon + 1:
            return
        for j in _extensions(ctx, path):
            path.append(j)
            extend(path)
            path.pop()

    extend([ctx.current])
    return sorted(plans)


def _determinant(process: ConditionedProcess, inputs: List[Tuple[float, ...]]) -> float:
    if not inputs:
        return 0.0
    return generalized_variance(process.joint(inputs))


def hp_objective(plan: Union[PlannedPath, Sequence[NodeId]], ctx: PolicyContext, alpha: float) -> float:
    """
    Expected total net gain of a plan plus alpha times its generalized variance

    Beliefs stay frozen; only the position and a synthetic visited set roll forward.
    The regularizer is the determinant of the cost posterior over the plan's
    unobserved edge features plus that of the reward posterior over the features
    of its unvisited, unobserved nodes. Repeated feature vectors count once and an
    empty set contributes 0.

    Raises:
        NonAdjacentMoveError: If the plan is not adjacency-consistent
    """
    nodes = plan.nodes if isinstance(plan, PlannedPath) else tuple(plan)
    visited = set(ctx.visited)
    total = 0.0
    cost_inputs: List[Tuple[float, ...]] = []
    reward_inputs: List[Tuple[float, ...]] = []

    for u, v in zip(nodes, nodes[1:]):
        key = ctx.view.check_move(u, v)
        if u == v:
            continue
        total -= ctx.cost_mean(u, v)
        if not ctx.edge_observed(u, v):
            x = ctx.view.edge_features[key]
            if x not in cost_inputs:
                cost_inputs.append(x)
        if v not in visited:
            total += ctx.reward_mean(v)
            visited.add(v)
            if v not in ctx.visited and not ctx.node_observed(v):
                y = ctx.view.node_features[v]
                if y not in reward_inputs:
                    reward_inputs.append(y)

    if alpha:
        belief = ctx.state.belief
        total += alpha * (_determinant(belief.cost_process, cost_inputs)
                          + _determinant(belief.reward_process, reward_inputs))
    return total


def _greedy_path(ctx: PolicyContext, horizon: int) -> List[NodeId]:
    """Extend by the best synthetic one-step gain, without node repeats, until H or a dead end"""
    path = [ctx.current]
    visited = set(ctx.visited)

    def step_gain(u: NodeId, j: NodeId) -> float:
        gain = -ctx.cost_mean(u, j)
        if j not in visited:
            gain += ctx.reward_mean(j)
        return gain

    while len(path) < horizon + 1:
        u = path[-1]
        candidates = _extensions(ctx, path)
        if not candidates:
            break
        j = argmax_lowest_id(candidates, lambda j: step_gain(u, j))
        path.append(j)
        visited.add(j)
    return path


def _random_path(ctx: PolicyContext, horizon: int, rng: np.random.Generator) -> List[NodeId]:
    path = [ctx.current]
    while len(path) < horizon + 1:
        candidates = _extensions(ctx, path)
        if not candidates:
            break
        path.append(candidates[int(rng.integers(len(candidates)))])
    return path


def _pair_replacements(ctx: PolicyContext, path: Sequence[NodeId], k: int) -> Iterator[List[NodeId]]:
    """
    Reconnections after removing the adjacent edges (path[k-1], path[k]) and (path[k], path[k+1])

    Inside the path the middle node is replaced by another node joining both ends.
    At the tail both removed edges are free, so any feasible pair of new nodes
    (the reversed pair included) may replace them.
    """
    prefix = path[:k]
    before = path[k - 1]
    if k + 1 < len(path) - 1:
        after = path[k + 1]
        for m in ctx.view.neighbors(before):
            if m in path or not ctx.view.is_adjacent(m, after):
                continue
            yield list(prefix) + [m] + list(path[k + 1:])
        return

    current_pair = (path[k], path[k + 1])
    for m1 in ctx.view.neighbors(before):
        if m1 in prefix:
            continue
        for m2 in ctx.view.neighbors(m1):
            if m2 == m1 or m2 in prefix or (m1, m2) == current_pair:
                continue
            yield list(prefix) + [m1, m2]


def _removals(ctx: PolicyContext, path: Sequence[NodeId]) -> Iterator[List[NodeId]]:
    """Plans one node shorter: an inner node bypassed by a direct edge, or the last node dropped"""
    for k in range(1, len(path) - 1):
        if ctx.view.is_adjacent(path[k - 1], path[k + 1]):
            yield list(path[:k]) + list(path[k + 1:])
    if len(path) > 1:
        yield list(path[:-1])


def _neighborhood(ctx: PolicyContext, path: Sequence[NodeId], horizon: int) -> Iterator[List[NodeId]]:
    for k in range(1, len(path) - 1):
        yield from _pair_replacements(ctx, path, k)
    yield from _removals(ctx, path)
    if len(path) < horizon + 1:
        for j in _extensions(ctx, path):
            yield list(path) + [j]


def hp_neighborhood_search(ctx: PolicyContext, alpha: float, horizon: int,
                           rng: Optional[np.random.Generator] = None,
                           restarts: int = DEFAULT_RESTARTS) -> PlannedPath:
    """
    Local search over H-paths by adjacent edge-pair exchanges

    Starts from the greedy path; when the greedy path dead-ends before H steps,
    random constructions are tried as well and the best one is the start. Besides
    the exchanges, a node may be bypassed, the last node dropped or one node
    appended. Each pass accepts the first strictly improving neighbor, so the
    objective sequence (kept in history) never decreases and the search terminates.

    Args:
        ctx: Decision context
        alpha: Weight of the generalized-variance regularizer
        horizon: Plan length H
        rng: Random stream for the restarts
        restarts: Number of random constructions after a greedy dead end

    Returns:
        PlannedPath: A local optimum
    """
    if horizon < 1:
        raise ValueError(f"H must be at least 1, got {horizon}")

    def score(path: Sequence[NodeId]) -> float:
        return hp_objective(_pad(path, horizon), ctx, alpha)

    best = _greedy_path(ctx, horizon)
    best_value = score(best)
    if len(best) < horizon + 1 and restarts > 0:
        rng = rng if rng is not None else np.random.default_rng(0)
        for _ in range(restarts):
            candidate = _random_path(ctx, horizon, rng)
            value = score(candidate)
            if value > best_value:
                best, best_value = candidate, value

    history = [best_value]
    improved = True
    while improved:
        improved = False
        for candidate in _neighborhood(ctx, best, horizon):
            value = score(candidate)
            if value > best_value:
                best, best_value = candidate, value
                history.append(value)
                improved = True
                break

    return PlannedPath(_pad(best, horizon), best_value, tuple(history))


def hp_best_plan(ctx: PolicyContext, alpha: float, horizon: int,
                 rng: Optional[np.random.Generator] = None,
                 max_horizon: int = 6, max_nodes: int = 12) -> PlannedPath:
    """
    Exhaustive solution of the H-path problem

    Plans within 1e-9 (relative) of the optimum are tied; the tie is broken with rng,
    or by the lexicographically smallest plan when no rng is given.
    """
    plans = enumerate_paths(ctx, horizon, max_horizon, max_nodes)
    values = [hp_objective(p, ctx, alpha) for p in plans]
    best_value = max(values)
    tolerance = 1e-9 * max(1.0, abs(best_value))
    tied = [i for i, v in enumerate(values) if v >= best_value - tolerance]
    pick = tied[int(rng.integers(len(tied)))] if rng is not None and len(tied) > 1 else tied[0]
    return PlannedPath(plans[pick], values[pick])


def hp_decide(ctx: PolicyContext, alpha: float, horizon: int,
              rng: Optional[np.random.Generator] = None,
              solver: str = 'search',
              max_horizon: int = 6, max_nodes: int = 12) -> NodeId:
    """
    Rolling-horizon decision: first step of the best H-path plan

    With the search solver the local optimum competes with the stay plan (value 0);
    on equal values the lower first node id wins, as in the one-step policies.
    """
    if solver == 'exhaustive':
        return hp_best_plan(ctx, alpha, horizon, rng, max_horizon, max_nodes).first_step
    if solver != 'search':
        raise ValueError(f"unknown HP solver {solver!r}")

    plan = hp_neighborhood_search(ctx, alpha, horizon, rng)
    i = ctx.current
    if plan.value < 0.0 or (plan.value == 0.0 and i < plan.first_step):
        return i
    return plan.first_step


class HPathPolicy(Policy):
    """Rolling-horizon policy over H-step paths"""
    def __init__(self, params, max_horizon: int = 6, max_nodes: int = 12,
                 logger: Optional[logging.Logger] = None):
        super().__init__(params)
        self.max_horizon = max_horizon
        self.max_nodes = max_nodes
        self.logger = logger or logging.getLogger("POLICY")

    def decide(self, ctx: PolicyContext, rng: Optional[np.random.Generator] = None) -> NodeId:
        p = self.params
        j = hp_decide(ctx, p.alpha, p.horizon, rng, p.solver, self.max_horizon, self.max_nodes)
        self.logger.debug(f"{p.descriptor} at {ctx.view.labels[ctx.current]}: next {ctx.view.labels[j]}")
        return j
