# src/dataset/domain.py
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from src.config import DAMAGE_INDEX_TOL
from src.errors import ConfigurationError, DegenerateInputError, ShapeMismatchError
from src.logger_config import logger


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class RegressionDomain:
    """
    Feature matrix plus crack-length labels (mm) for one domain.

    Rows are kept in ascending label order: the online protocol consumes the
    target domain in that order to mimic a growing crack.
    """
    features: np.ndarray
    labels: np.ndarray
    name: str = "domain"

    def __post_init__(self):
        features = _frozen(self.features)
        labels = _frozen(self.labels)
        if features.ndim != 2:
            raise ShapeMismatchError(f"features must be a 2-D matrix, got shape {features.shape}")
        if labels.ndim != 1 or labels.shape[0] != features.shape[0]:
            raise ShapeMismatchError(
                f"labels length {labels.shape} does not match feature rows {features.shape[0]}")
        if features.shape[0] == 0:
            raise DegenerateInputError(f"domain '{self.name}' is empty")
        if not np.all(np.isfinite(features)) or not np.all(np.isfinite(labels)):
            raise ConfigurationError(f"domain '{self.name}' contains non-finite values")
        if np.any(labels < 0):
            raise ConfigurationError(f"domain '{self.name}' has negative labels")
        if np.any(np.diff(labels) < 0):
            raise ConfigurationError(f"domain '{self.name}' labels are not sorted ascending")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def subset(self, indices) -> "RegressionDomain":
        indices = np.asarray(indices, dtype=int)
        return RegressionDomain(self.features[indices], self.labels[indices], self.name)

    def with_features(self, features) -> "RegressionDomain":
        return RegressionDomain(features, self.labels, self.name)


@dataclass(frozen=True)
class LabelScaler:
    """Affine map of labels onto [0, 1]."""
    lo: float
    hi: float

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)) or self.hi <= self.lo:
            raise DegenerateInputError(f"label scaler needs hi > lo, got lo={self.lo}, hi={self.hi}")

    def scale(self, labels) -> np.ndarray:
        return (np.asarray(labels, dtype=np.float64) - self.lo) / (self.hi - self.lo)

    def unscale(self, scaled) -> np.ndarray:
        return np.asarray(scaled, dtype=np.float64) * (self.hi - self.lo) + self.lo


def scale_labels(labels) -> Tuple[np.ndarray, LabelScaler]:
    """
    Scale labels onto [0, 1]: min maps to 0, max to 1.

    4 digit function signature: 2203
    """
    labels = np.asarray(labels, dtype=np.float64)
    if labels.size == 0:
        raise DegenerateInputError("cannot scale an empty label vector")
    lo, hi = float(labels.min()), float(labels.max())
    if hi <= lo:
        raise DegenerateInputError(f"constant labels ({lo}) cannot be scaled to [0, 1]")
    scaler = LabelScaler(lo, hi)
    return scaler.scale(labels), scaler


def damage_index(strains) -> np.ndarray:
    """
    Damage index of one strain snapshot: each sensor's strain divided by
    the mean strain over all sensors, which removes the load dependence.

    4 digit function signature: 2207
    """
    strains = np.asarray(strains, dtype=np.float64)
    if strains.ndim != 1 or strains.size == 0:
        raise ShapeMismatchError(f"damage index expects a non-empty vector, got shape {strains.shape}")
    mean = strains.mean()
    if abs(mean) < DAMAGE_INDEX_TOL:
        raise DegenerateInputError(f"mean strain {mean} is zero within {DAMAGE_INDEX_TOL}")
    return strains / mean


def damage_index_domain(domain: RegressionDomain) -> RegressionDomain:
    """Apply the damage index to every sample of a domain."""
    indexed = np.vstack([damage_index(row) for row in domain.features])
    logger.debug(f"[DATASET 2208:10] :: Damage index applied to '{domain.name}' ({domain.n_samples} rows)")
    return domain.with_features(indexed)
