# src/adapt/kernel.py

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.spatial.distance import pdist
from sklearn.metrics.pairwise import rbf_kernel as sk_rbf_kernel

from src.config import DEFAULT_GAMMA_EXPONENTS
from src.errors import ConfigurationError, ShapeMismatchError


@dataclass(frozen=True)
class KernelSpec:
    gamma: float

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma <= 0:
            raise ConfigurationError(f"kernel gamma must be finite and positive, got {self.gamma}")

    @property
    def sigma(self) -> float:
        return float(np.sqrt(1.0 / (2.0 * self.gamma)))


def rbf_kernel(rows_a, rows_b, spec: KernelSpec) -> np.ndarray:
    """
    exp(-gamma * ||x - x'||^2) for every pair of rows.

    4 digit function signature: 4101
    """
    a = np.atleast_2d(np.asarray(rows_a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(rows_b, dtype=np.float64))
    if a.shape[1] != b.shape[1]:
        raise ShapeMismatchError(f"kernel rows have {a.shape[1]} and {b.shape[1]} features")
    return sk_rbf_kernel(a, b, gamma=spec.gamma)


def centering_matrix(n: int) -> np.ndarray:
    if n < 1:
        raise ConfigurationError(f"centering matrix needs n >= 1, got {n}")
    return np.eye(n) - np.full((n, n), 1.0 / n)


def standardization(rows) -> Tuple[np.ndarray, np.ndarray]:
    """Per-feature mean and scale; zero-variance features keep scale 1."""
    rows = np.asarray(rows, dtype=np.float64)
    center = rows.mean(axis=0)
    scale = rows.std(axis=0)
    scale = np.where(scale > 0, scale, 1.0)
    return center, scale


def standardize(rows, center=None, scale=None) -> np.ndarray:
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    if center is None or scale is None:
        center, scale = standardization(rows)
    return (rows - center) / scale


def median_squared_distance(rows) -> float:
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    if rows.shape[0] < 2:
        return 1.0
    d2 = pdist(rows, "sqeuclidean")
    d2 = d2[d2 > 0]
    return float(np.median(d2)) if d2.size else 1.0


def default_gamma_grid(rows, exponents: Sequence[int] = DEFAULT_GAMMA_EXPONENTS) -> Sequence[float]:
    """
    Candidate gammas 2^e / (median squared distance) of the standardized
    rows, ascending.

    4 digit function signature: 4105
    """
    if len(exponents) == 0:
        raise ConfigurationError("gamma grid exponents are empty")
    med = median_squared_distance(standardize(rows))
    return sorted(float(2.0 ** e / med) for e in exponents)
