from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


@dataclass(frozen=True)
class Kernel:
    """
    Radial-basis covariance k(x, x') = s * exp(-|x - x'|^2 / (c * l^2))

    c is 2 when half_factor is set (the default convention), 1 otherwise.
    """
    bandwidth: float = 1.0
    signal_variance: float = 1.0
    half_factor: bool = True

    def __post_init__(self):
        if self.bandwidth <= 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth}")
        if self.signal_variance <= 0:
            raise ValueError(f"signal_variance must be positive, got {self.signal_variance}")

    def __call__(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Cross-covariance matrix between the rows of X and Y"""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        scale = (2.0 if self.half_factor else 1.0) * self.bandwidth ** 2
        return self.signal_variance * np.exp(-cdist(X, Y, 'sqeuclidean') / scale)

    def diag(self, X: np.ndarray) -> np.ndarray:
        return np.full(np.atleast_2d(X).shape[0], self.signal_variance)


@dataclass(frozen=True)
class GpPrior:
    """Constant-mean Gaussian-process prior"""
    mean: float
    kernel: Kernel = Kernel()
