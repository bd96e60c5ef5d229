import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

from .kernel import GpPrior

logger = logging.getLogger("BELIEF")

Vector = Tuple[float, ...]

# Numerical floor for posterior variances before clamping to zero
VARIANCE_FLOOR = -1e-8


class ObservationConflictError(ValueError):
    """Raised when a stored input is re-observed with a different value (noise-free model)"""


class FactorizationError(RuntimeError):
    """Raised when the Gram matrix cannot be factorized even after jitter escalation"""


@dataclass(frozen=True)
class ObservationSet:
    """
    Ordered (input, value) pairs with unique inputs

    The set is a value: add() returns a new set and leaves this one unchanged.
    """
    inputs: Tuple[Vector, ...] = ()
    values: Tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.inputs) != len(self.values):
            raise ValueError("inputs and values must have the same length")

    def __len__(self) -> int:
        return len(self.inputs)

    def __contains__(self, x: Sequence[float]) -> bool:
        return tuple(float(v) for v in x) in self.inputs

    def value_of(self, x: Sequence[float]) -> Optional[float]:
        key = tuple(float(v) for v in x)
        try:
            return self.values[self.inputs.index(key)]
        except ValueError:
            return None

    def add(self, x: Sequence[float], v: float, tol: float = 1e-9) -> "ObservationSet":
        """
        Add an observation, idempotent for an identical pair

        Raises:
            ObservationConflictError: If x is stored with a different value
        """
        key = tuple(float(c) for c in x)
        if key in self.inputs:
            stored = self.values[self.inputs.index(key)]
            if abs(stored - v) > tol * max(1.0, abs(stored), abs(v)):
                raise ObservationConflictError(
                    f"input {key} already observed with value {stored}, got {v}"
                )
            return self
        return ObservationSet(self.inputs + (key,), self.values + (float(v),))

    def as_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.array(self.inputs, dtype=float), np.array(self.values, dtype=float)


def add_observation(obs: ObservationSet, x: Sequence[float], v: float) -> ObservationSet:
    """Functional form of ObservationSet.add"""
    return obs.add(x, v)


@dataclass(frozen=True)
class PosteriorSummary:
    """Joint posterior over a finite set of query points"""
    mean: np.ndarray
    covariance: np.ndarray = field(repr=False)


def factorize(K: np.ndarray, jitter_start: float = 1e-10, jitter_max: float = 1e-6):
    """
    Cholesky factor of a Gram matrix with jitter escalation

    The plain matrix is tried first; on failure a jitter of jitter_start times the
    mean diagonal is added and raised tenfold up to jitter_max.

    Raises:
        FactorizationError: If every attempt fails
    """
    try:
        return cho_factor(K, lower=True)
    except np.linalg.LinAlgError:
        pass

    scale = float(np.mean(np.diag(K))) if K.size else 1.0
    jitter = jitter_start
    while jitter <= jitter_max * (1 + 1e-12):
        try:
            factor = cho_factor(K + jitter * scale * np.eye(K.shape[0]), lower=True)
            logger.debug(f"Gram factorized with jitter {jitter:g}")
            return factor
        except np.linalg.LinAlgError:
            jitter *= 10.0
    raise FactorizationError(f"Gram matrix of size {K.shape[0]} not factorizable up to jitter {jitter_max:g}")


class ConditionedProcess:
    """
    A GP prior conditioned on a noise-free observation set

    The factorization is computed once; marginal and joint queries reuse it.
    """
    def __init__(self, prior: GpPrior, obs: ObservationSet,
                 jitter_start: float = 1e-10, jitter_max: float = 1e-6):
        self.prior = prior
        self.obs = obs
        self._X, y = obs.as_arrays()
        self._factor = None
        self._alpha = None
        if len(obs):
            K = prior.kernel(self._X, self._X)
            self._factor = factorize(K, jitter_start, jitter_max)
            self._alpha = cho_solve(self._factor, y - prior.mean)

    def _cross(self, Xs: np.ndarray) -> np.ndarray:
        return self.prior.kernel(self._X, Xs)

    def means(self, Xs: Iterable[Sequence[float]]) -> np.ndarray:
        """Posterior means at each query row"""
        Xs = np.atleast_2d(np.asarray(list(Xs), dtype=float))
        if Xs.size == 0:
            return np.zeros(0)
        if self._factor is None:
            return np.full(Xs.shape[0], self.prior.mean)
        return self.prior.mean + self._cross(Xs).T @ self._alpha

    def variances(self, Xs: Iterable[Sequence[float]]) -> np.ndarray:
        """Posterior marginal variances at each query row, clamped at zero"""
        Xs = np.atleast_2d(np.asarray(list(Xs), dtype=float))
        if Xs.size == 0:
            return np.zeros(0)
        prior_var = self.prior.kernel.diag(Xs)
        if self._factor is None:
            return prior_var
        V = solve_triangular(self._factor[0], self._cross(Xs), lower=True)
        return np.maximum(prior_var - np.sum(V * V, axis=0), 0.0)

    def marginal(self, x: Sequence[float]) -> Tuple[float, float]:
        return float(self.means([x])[0]), float(self.variances([x])[0])

    def joint(self, Xs: Iterable[Sequence[float]]) -> PosteriorSummary:
        Xs = np.atleast_2d(np.asarray(list(Xs), dtype=float))
        if Xs.size == 0:
            return PosteriorSummary(np.zeros(0), np.zeros((0, 0)))
        cov = self.prior.kernel(Xs, Xs)
        if self._factor is not None:
            V = solve_triangular(self._factor[0], self._cross(Xs), lower=True)
            cov = cov - V.T @ V
        cov = 0.5 * (cov + cov.T)
        diag = np.diag(cov).copy()
        np.fill_diagonal(cov, np.where(diag < 0.0, 0.0, diag))
        return PosteriorSummary(self.means(Xs), cov)


def posterior_marginal(prior: GpPrior, obs: ObservationSet, x: Sequence[float]) -> Tuple[float, float]:
    """
    Posterior mean and variance at a single input

    With no observations this returns (prior mean, signal variance).

    Raises:
        FactorizationError: If the Gram matrix cannot be factorized
    """
    return ConditionedProcess(prior, obs).marginal(x)


def posterior_joint(prior: GpPrior, obs: ObservationSet, Xs: Sequence[Sequence[float]]) -> PosteriorSummary:
    """
    Joint posterior over several inputs

    Raises:
        ValueError: If Xs is empty
        FactorizationError: If the Gram matrix cannot be factorized
    """
    if len(Xs) == 0:
        raise ValueError("posterior_joint needs at least one query point")
    return ConditionedProcess(prior, obs).joint(Xs)


def generalized_variance(summary: PosteriorSummary) -> float:
    """
    Determinant of the posterior covariance, never negative

    An empty covariance carries no uncertainty and yields 0.
    """
    cov = np.asarray(summary.covariance, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError(f"covariance must be square, got shape {cov.shape}")
    if cov.shape[0] == 0:
        return 0.0
    return max(0.0, float(np.linalg.det(cov)))
