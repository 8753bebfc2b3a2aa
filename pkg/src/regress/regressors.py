# src/regress/regressors.py

from typing import Callable, Optional, Protocol

import numpy as np
from scipy.linalg import lstsq

from src.config import DEFAULT_REGRESSOR
from src.errors import ConfigurationError, ShapeMismatchError
from src.regress.gpr import GprHyper, gpr_fit, gpr_predict, select_hyperparameters


class Regressor(Protocol):
    def fit(self, x, y) -> "Regressor": ...

    def predict(self, x) -> np.ndarray: ...


class GprRegressor:
    """GP regressor that re-selects its hyperparameters on every fit."""

    def __init__(self, hyper: Optional[GprHyper] = None):
        self.fixed_hyper = hyper
        self.hyper = hyper
        self.model = None

    def fit(self, x, y):
        self.hyper = self.fixed_hyper or select_hyperparameters(x, y)
        self.model = gpr_fit(x, y, self.hyper)
        return self

    def predict(self, x) -> np.ndarray:
        if self.model is None:
            raise ConfigurationError("GprRegressor.predict called before fit")
        mean, _ = gpr_predict(self.model, x)
        return mean

    def predict_with_variance(self, x):
        return gpr_predict(self.model, x)


class LeastSquaresRegressor:
    """Affine least-squares fit; the cheap stand-in regressor."""

    def __init__(self):
        self.coef = None

    def fit(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        y = np.asarray(y, dtype=np.float64).reshape(-1)
        if x.shape[0] != y.size:
            raise ShapeMismatchError(f"{x.shape[0]} rows but {y.size} targets")
        design = np.column_stack((np.ones(x.shape[0]), x))
        self.coef = lstsq(design, y)[0]
        return self

    def predict(self, x) -> np.ndarray:
        if self.coef is None:
            raise ConfigurationError("LeastSquaresRegressor.predict called before fit")
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        if x.shape[1] != self.coef.size - 1:
            raise ShapeMismatchError(f"query has {x.shape[1]} features, model expects {self.coef.size - 1}")
        return self.coef[0] + x @ self.coef[1:]


REGRESSORS = {
    "gpr": GprRegressor,
    "linear": LeastSquaresRegressor,
}


def make_regressor(kind: str = DEFAULT_REGRESSOR) -> Callable[[], Regressor]:
    """Factory of fresh, unfitted regressors of the given kind."""
    try:
        return REGRESSORS[kind]
    except KeyError:
        raise ConfigurationError(f"unknown regressor '{kind}', choose from {sorted(REGRESSORS)}")
