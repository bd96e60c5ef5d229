from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from src.graph import NodeId
from src.traversal import PolicyContext

KINDS = ('M', 'UCB', 'HP', 'SC')
HP_SOLVERS = ('search', 'exhaustive')


class PolicySpecError(ValueError):
    """Raised when a policy spec string cannot be parsed"""


@dataclass(frozen=True)
class PolicyParams:
    """
    Policy family and its hyperparameters

    Only the fields of the active kind are read. walk_cap=None means 2|E|
    (non-self edges) for SC.
    """
    kind: str = 'M'
    lam: float = 0.0
    alpha: float = 0.0
    horizon: int = 1
    beta: int = 1
    walk_cap: Optional[int] = None
    solver: str = 'search'

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PolicySpecError(f"unknown policy kind {self.kind!r}")
        if self.lam < 0 or self.alpha < 0:
            raise PolicySpecError("lambda and alpha must be non-negative")
        if self.horizon < 1 or self.beta < 1:
            raise PolicySpecError("H and beta must be at least 1")
        if self.walk_cap is not None and self.walk_cap < 1:
            raise PolicySpecError("V must be at least 1")
        if self.solver not in HP_SOLVERS:
            raise PolicySpecError(f"unknown HP solver {self.solver!r}")

    @property
    def descriptor(self) -> str:
        """Canonical spec string"""
        if self.kind == 'M':
            return 'M'
        if self.kind == 'UCB':
            return f"UCB:lambda={self.lam:g}"
        if self.kind == 'HP':
            return f"HP:alpha={self.alpha:g},H={self.horizon},solver={self.solver}"
        cap = '2E' if self.walk_cap is None else str(self.walk_cap)
        return f"SC:beta={self.beta},V={cap}"

    @property
    def family(self) -> str:
        return self.kind


_KEYS = {
    'UCB': {'lambda': 'lam'},
    'HP': {'alpha': 'alpha', 'h': 'horizon', 'solver': 'solver'},
    'SC': {'beta': 'beta', 'v': 'walk_cap'},
}


def parse_policy_spec(spec: str) -> PolicyParams:
    """
    Parse a spec such as 'M', 'UCB:lambda=1', 'HP:alpha=1,H=3' or 'SC:beta=100,V=2E'

    Raises:
        PolicySpecError: On unknown kinds, keys or malformed values
    """
    text = spec.strip()
    kind, _, rest = text.partition(':')
    kind = kind.strip().upper()
    if kind not in KINDS:
        raise PolicySpecError(f"unknown policy kind in {spec!r}")

    values = {}
    allowed = _KEYS.get(kind, {})
    for item in filter(None, (part.strip() for part in rest.split(','))):
        key, sep, raw = item.partition('=')
        key = key.strip().lower()
        raw = raw.strip()
        if not sep or key not in allowed:
            raise PolicySpecError(f"unexpected parameter {item!r} for {kind}")
        field_name = allowed[key]
        try:
            if field_name in ('lam', 'alpha'):
                values[field_name] = float(raw)
            elif field_name == 'solver':
                values[field_name] = raw.lower()
            elif field_name == 'walk_cap':
                values[field_name] = None if raw.upper() == '2E' else int(raw)
            else:
                values[field_name] = int(raw)
        except ValueError as e:
            raise PolicySpecError(f"bad value in {item!r}: {e}") from e
    return PolicyParams(kind=kind, **values)


def argmax_lowest_id(candidates: Iterable[NodeId], score: Callable[[NodeId], float]) -> NodeId:
    """Arg-max over candidates; ties go to the lowest node id"""
    best = None
    best_value = -np.inf
    for j in sorted(candidates):
        value = score(j)
        if best is None or value > best_value:
            best, best_value = j, value
    return best


class Policy(ABC):
    """
    Abstract base class for traversal policies

    A policy maps the decision context to the next node; it may only use what the
    context exposes (topology, covariates and the traveler's beliefs).
    """
    def __init__(self, params: PolicyParams):
        self.params = params

    @property
    def descriptor(self) -> str:
        return self.params.descriptor

    @abstractmethod
    def decide(self, ctx: PolicyContext, rng: Optional[np.random.Generator] = None) -> NodeId:
        """
        Choose the next node

        Args:
            ctx: Decision context at the current epoch
            rng: Random stream of this epoch

        Returns:
            NodeId: The chosen node (the current node to stay)
        """
        pass
