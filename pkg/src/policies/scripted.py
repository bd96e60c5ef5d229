from typing import Optional, Sequence

import numpy as np

from src.graph import NodeId
from src.traversal import PolicyContext

from .base import Policy


class ScriptedPolicy(Policy):
    """
    Replays a fixed walk that starts at the instance's start node

    At step t the policy moves to walk[t+1] while the traveler is where the walk
    expects; otherwise, and once the walk is exhausted, it stays.
    """
    def __init__(self, walk: Sequence[NodeId], name: Optional[str] = None):
        super().__init__(None)
        if len(walk) == 0:
            raise ValueError("scripted walk is empty")
        self.walk = tuple(walk)
        self.name = name

    @property
    def descriptor(self) -> str:
        return self.name or "W:" + "-".join(str(i) for i in self.walk)

    def decide(self, ctx: PolicyContext, rng: Optional[np.random.Generator] = None) -> NodeId:
        t = ctx.state.step
        if t + 1 < len(self.walk) and self.walk[t] == ctx.current:
            return self.walk[t + 1]
        return ctx.current
