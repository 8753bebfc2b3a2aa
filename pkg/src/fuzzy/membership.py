# src/fuzzy/membership.py

from dataclasses import dataclass

import numpy as np

from src.config import DEFAULT_QUANTILES
from src.errors import ConfigurationError, DegenerateClassError, ShapeMismatchError
from src.fuzzy.percentiles import kde_percentiles
from src.logger_config import logger


@dataclass(frozen=True)
class FuzzyPartition:
    """
    Triangular fuzzy sets peaked at the breakpoints (scaled-label space).

    The first set keeps membership 1 left of its peak and the last set keeps
    membership 1 right of its peak, so the smallest and largest cracks are
    never weightless.
    """
    breakpoints: np.ndarray

    def __post_init__(self):
        b = np.array(self.breakpoints, dtype=np.float64)
        if b.ndim != 1 or b.size == 0:
            raise ConfigurationError(f"breakpoints must be a non-empty vector, got {self.breakpoints}")
        if np.any(np.diff(b) <= 0):
            raise ConfigurationError(f"breakpoints must be strictly ascending, got {b.tolist()}")
        if np.any(b < 0) or np.any(b > 1):
            raise ConfigurationError(f"breakpoints must lie in [0, 1], got {b.tolist()}")
        b.setflags(write=False)
        object.__setattr__(self, "breakpoints", b)

    @property
    def n_sets(self) -> int:
        return self.breakpoints.size


@dataclass(frozen=True)
class MembershipMatrix:
    mu: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        mu = np.array(self.mu, dtype=np.float64)
        if mu.ndim != 2:
            raise ShapeMismatchError(f"membership matrix must be 2-D, got shape {mu.shape}")
        mu.setflags(write=False)
        object.__setattr__(self, "mu", mu)

    @property
    def n_sets(self) -> int:
        return self.mu.shape[1]


def build_fuzzy_partition(breakpoints) -> FuzzyPartition:
    """4 digit function signature: 3111"""
    return FuzzyPartition(np.asarray(breakpoints, dtype=np.float64))


def evaluate_membership(partition: FuzzyPartition, y) -> np.ndarray:
    """Membership degrees of scalar or vector labels, one column per set."""
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    b = partition.breakpoints
    columns = []
    for c in range(partition.n_sets):
        peak = np.zeros(partition.n_sets)
        peak[c] = 1.0
        # np.interp clamps to the end values: shoulders for the outer sets
        columns.append(np.interp(y, b, peak))
    if not columns or y.size == 0:
        return np.zeros((y.size, partition.n_sets))
    return np.column_stack(columns)


def membership(partition: FuzzyPartition, labels) -> MembershipMatrix:
    """
    Membership degree of every label in every fuzzy set.

    4 digit function signature: 3112
    """
    labels = np.asarray(labels, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(labels)):
        raise ConfigurationError("membership needs finite labels")
    return MembershipMatrix(evaluate_membership(partition, labels), normalized=False)


def normalize_memberships(mu: MembershipMatrix) -> MembershipMatrix:
    """
    Divide every column by its sum so each fuzzy class weights its domain's
    samples like a mean.

    4 digit function signature: 3113
    """
    values = mu.mu if isinstance(mu, MembershipMatrix) else np.asarray(mu, dtype=np.float64)
    sums = values.sum(axis=0)
    empty = np.flatnonzero(sums <= 0)
    if empty.size:
        raise DegenerateClassError(f"fuzzy classes {empty.tolist()} have no support in this domain")
    return MembershipMatrix(values / sums[None, :], normalized=True)


def fuzzy_memberships(labels, quantiles=DEFAULT_QUANTILES) -> MembershipMatrix:
    """
    Labels (already scaled to [0, 1]) to memberships: KDE percentiles,
    triangular partition, membership degrees.

    4 digit function signature: 3115
    """
    breakpoints = kde_percentiles(labels, quantiles)
    partition = build_fuzzy_partition(breakpoints)
    mu = membership(partition, labels)
    logger.debug(f"[FUZZY 3115:10] :: n={mu.mu.shape[0]} | class mass={mu.mu.sum(axis=0).round(3).tolist()}")
    return mu
