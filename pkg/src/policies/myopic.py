from typing import Optional

import numpy as np

from src.graph import NodeId
from src.traversal import PolicyContext, expected_net_gain, net_gain_variance

from .base import Policy, PolicyParams, argmax_lowest_id


def myopic_decide(ctx: PolicyContext) -> NodeId:
    """Node with the highest expected net gain among the neighbors and the current node"""
    return argmax_lowest_id(ctx.view.neighbors(ctx.current), lambda j: expected_net_gain(ctx, j))


def ucb_decide(ctx: PolicyContext, lam: float) -> NodeId:
    """
    Node maximizing expected net gain plus lam times its variance

    The bonus uses the variance itself, not the standard deviation.
    """
    if lam < 0:
        raise ValueError(f"lambda must be non-negative, got {lam}")
    return argmax_lowest_id(
        ctx.view.neighbors(ctx.current),
        lambda j: expected_net_gain(ctx, j) + lam * net_gain_variance(ctx, j)
    )


class MyopicPolicy(Policy):
    """Exploitative policy: best immediate expected net gain"""
    def __init__(self, params: Optional[PolicyParams] = None):
        super().__init__(params or PolicyParams('M'))

    def decide(self, ctx: PolicyContext, rng: Optional[np.random.Generator] = None) -> NodeId:
        return myopic_decide(ctx)


class UcbPolicy(Policy):
    """Upper-confidence policy with a variance bonus"""
    def decide(self, ctx: PolicyContext, rng: Optional[np.random.Generator] = None) -> NodeId:
        return ucb_decide(ctx, self.params.lam)
