# src/adapt/params.py

from dataclasses import dataclass, fields, replace
from typing import Optional, Tuple

import numpy as np

from src.config import (
    ADAPT_CONFIG_FILE,
    DEFAULT_LAMBDA,
    DEFAULT_SUBSPACE_DIM,
    DEFAULT_N_CLASSES,
    DEFAULT_MAX_ITERS,
    DEFAULT_TOL,
    DEFAULT_QUANTILES,
    DEFAULT_RANK_TOL,
    DEFAULT_PENCIL_SCALING,
    PENCIL_SCALINGS,
)
from src.errors import ConfigurationError
from utils.config_watcher import ConfigWatcher

adapt_config_watcher = ConfigWatcher(ADAPT_CONFIG_FILE)


@dataclass(frozen=True)
class AdaptParams:
    """
    lam: regularization; k: subspace dimension; n_classes: fuzzy classes C;
    max_iters / tol: pseudo-label refinement stop rule (scaled-label units);
    pencil_scaling: "relative" rescales the MMD matrix to unit Frobenius norm
    and lam to the mean centered kernel variance, "absolute" uses both as given;
    whiten: feed the regressor A^T K as solved (unit centered variance per
    component) instead of weighting each component by 1/sqrt(phi).
    """
    lam: float = DEFAULT_LAMBDA
    k: int = DEFAULT_SUBSPACE_DIM
    n_classes: int = DEFAULT_N_CLASSES
    max_iters: int = DEFAULT_MAX_ITERS
    tol: float = DEFAULT_TOL
    quantiles: Tuple[float, ...] = DEFAULT_QUANTILES
    rank_tol: float = DEFAULT_RANK_TOL
    pencil_scaling: str = DEFAULT_PENCIL_SCALING
    whiten: bool = False

    def __post_init__(self):
        if self.lam < 0 or not np.isfinite(self.lam):
            raise ConfigurationError(f"lambda must be finite and >= 0, got {self.lam}")
        if int(self.k) < 1:
            raise ConfigurationError(f"subspace dimension k must be >= 1, got {self.k}")
        if int(self.n_classes) < 0:
            raise ConfigurationError(f"fuzzy class count must be >= 0, got {self.n_classes}")
        if int(self.max_iters) < 1:
            raise ConfigurationError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol <= 0:
            raise ConfigurationError(f"tol must be positive, got {self.tol}")
        if not 0 < self.rank_tol < 1:
            raise ConfigurationError(f"rank_tol must be in (0, 1), got {self.rank_tol}")
        if self.pencil_scaling not in PENCIL_SCALINGS:
            raise ConfigurationError(
                f"pencil_scaling must be one of {list(PENCIL_SCALINGS)}, got {self.pencil_scaling!r}")
        object.__setattr__(self, "whiten", bool(self.whiten))
        object.__setattr__(self, "quantiles", tuple(float(q) for q in self.quantiles))

    def class_quantiles(self) -> Tuple[float, ...]:
        """Quantiles of the C fuzzy-set peaks."""
        c = int(self.n_classes)
        if c == len(self.quantiles):
            return self.quantiles
        if c == 1:
            return (0.5,)
        return tuple(float(q) for q in np.linspace(0.05, 0.95, c))

    def with_overrides(self, **overrides) -> "AdaptParams":
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ConfigurationError(f"unknown adaptation parameters {sorted(unknown)}")
        if "quantiles" in overrides:
            overrides["quantiles"] = tuple(overrides["quantiles"])
        return replace(self, **overrides)


def get_adapt_param(method, key, default=None):
    """
    Retrieve an adaptation setting for a method, falling back to defaults.

    4 digit function signature: 4315
    """
    return adapt_config_watcher.method_param(method, key, default)


def load_adapt_params(method: Optional[str] = None, overrides: Optional[dict] = None) -> AdaptParams:
    """AdaptParams from config/adapt_config.json, then explicit overrides."""
    base = AdaptParams()
    values = {}
    for f in fields(AdaptParams):
        value = get_adapt_param(method, f.name, None)
        if value is not None:
            values[f.name] = value
    if overrides:
        values.update(overrides)
    return base.with_overrides(**values)
