from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.graph import NodeId
from src.traversal import PolicyContext

from .base import Policy


def walk_expected_gain(walk: Sequence[NodeId], ctx: PolicyContext) -> float:
    """
    Expected total net gain of a walk from the current node, beliefs frozen

    Rewards count once per distinct node not yet visited; posterior-mean costs
    accrue on every traversal; self-loops are free.

    Raises:
        ValueError: If the walk is empty or does not start at the current node
        NonAdjacentMoveError: If two consecutive nodes are not adjacent
    """
    if len(walk) == 0:
        raise ValueError("walk is empty")
    if walk[0] != ctx.current:
        raise ValueError(f"walk starts at {walk[0]}, traveler is at {ctx.current}")

    visited = set(ctx.visited)
    total = 0.0
    for u, v in zip(walk, walk[1:]):
        ctx.view.check_move(u, v)
        if u == v:
            continue
        total -= ctx.cost_mean(u, v)
        if v not in visited:
            total += ctx.reward_mean(v)
            visited.add(v)
    return total


def default_walk_cap(ctx: PolicyContext) -> int:
    """2|E| over the non-self edges, at least 1"""
    return max(1, 2 * sum(1 for key in ctx.view.edge_keys if not key.is_self_loop))


def sc_label_setting(ctx: PolicyContext, beta: int,
                     rng: Optional[np.random.Generator] = None,
                     walk_cap: Optional[int] = None) -> Tuple[List[NodeId], float]:
    """
    Label-setting search for a high-value walk, treating posterior means as truths

    Each of the beta iterations resets the labels, shuffles the directed edge list
    and runs up to N relaxation sweeps (N nodes). Every labelled node yields a
    candidate walk (its ordered predecessors followed by itself, cut to walk_cap
    edges) whose value is recomputed with walk_expected_gain. The best candidate
    over all iterations wins; ties keep the earliest iteration and lowest node id.

    Args:
        ctx: Decision context
        beta: Number of shuffled iterations
        rng: Random stream for the shuffles (iteration k uses the k-th draw)
        walk_cap: Maximum walk length in edges; defaults to 2|E|

    Returns:
        Tuple[List[NodeId], float]: The walk from the current node and its value;
        ([current], 0.0) when no walk has positive value
    """
    if beta < 1:
        raise ValueError(f"beta must be at least 1, got {beta}")
    rng = rng if rng is not None else np.random.default_rng(0)
    cap = walk_cap if walk_cap is not None else default_walk_cap(ctx)
    origin = ctx.current
    n = ctx.view.num_nodes

    arcs = []
    for key in ctx.view.edge_keys:
        if key.is_self_loop:
            continue
        cost = ctx.cost_mean(key.a, key.b)
        arcs.append((key.a, key.b, cost))
        arcs.append((key.b, key.a, cost))
    rewards = ctx.reward_means
    visited = ctx.visited

    best_walk = [origin]
    best_value = 0.0
    for _ in range(beta):
        order = rng.permutation(len(arcs)) if arcs else []
        z = np.full(n, -np.inf)
        z[origin] = 0.0
        omega: List[Tuple[NodeId, ...]] = [()] * n

        for _sweep in range(n):
            changed = False
            for idx in order:
                i, j, cost = arcs[idx]
                if z[i] == -np.inf:
                    continue
                if j not in visited and j not in omega[i]:
                    delta = rewards[j] - cost
                else:
                    delta = -cost
                if z[i] + delta > z[j]:
                    z[j] = z[i] + delta
                    omega[j] = omega[i] + (i,)
                    changed = True
            if not changed:
                break

        for node in range(n):
            if z[node] == -np.inf or not omega[node]:
                continue
            walk = list(omega[node] + (node,))[:cap + 1]
            value = walk_expected_gain(walk, ctx)
            if value > best_value:
                best_walk, best_value = walk, value

    return best_walk, best_value


def sc_decide(ctx: PolicyContext, beta: int,
              rng: Optional[np.random.Generator] = None,
              walk_cap: Optional[int] = None) -> NodeId:
    """First node of the label-setting walk; stay when the walk is empty or not worth taking"""
    walk, value = sc_label_setting(ctx, beta, rng, walk_cap)
    if len(walk) < 2 or value <= 0.0:
        return ctx.current
    return walk[1]


class ClairvoyantPolicy(Policy):
    """Sample-path policy: plans a walk as if the posterior means were the truths"""
    def decide(self, ctx: PolicyContext, rng: Optional[np.random.Generator] = None) -> NodeId:
        return sc_decide(ctx, self.params.beta, rng, self.params.walk_cap)
