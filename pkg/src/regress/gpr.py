# src/regress/gpr.py

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_solve, cholesky, solve_triangular
from scipy.spatial.distance import pdist
from sklearn.metrics.pairwise import rbf_kernel as sk_rbf_kernel

from src.config import GPR_JITTER_LADDER, GPR_LENGTHSCALE_FACTORS, GPR_NOISE_FACTORS
from src.errors import (
    ConfigurationError,
    GprFitError,
    HyperparameterSelectionError,
    ShapeMismatchError,
)
from src.logger_config import logger

VARIANCE_CLAMP_TOL = 1e-10


@dataclass(frozen=True)
class GprHyper:
    lengthscale: float
    signal_variance: float
    noise_variance: float = 0.0

    def __post_init__(self):
        values = (self.lengthscale, self.signal_variance, self.noise_variance)
        if not all(np.isfinite(v) for v in values):
            raise ConfigurationError(f"GPR hyperparameters must be finite, got {values}")
        if self.lengthscale <= 0 or self.signal_variance <= 0 or self.noise_variance < 0:
            raise ConfigurationError(f"invalid GPR hyperparameters {self}")


@dataclass(frozen=True)
class GprModel:
    x: np.ndarray
    y_centered: np.ndarray
    y_mean: float
    hyper: GprHyper
    chol: np.ndarray  # lower Cholesky factor of K + (noise + jitter) I
    alpha: np.ndarray
    jitter: float


def _as_rows(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    return x


def gpr_kernel(a, b, hyper: GprHyper) -> np.ndarray:
    gamma = 1.0 / (2.0 * hyper.lengthscale ** 2)
    return hyper.signal_variance * sk_rbf_kernel(a, b, gamma=gamma)


def gpr_fit(x, y, hyper: GprHyper) -> GprModel:
    """
    Exact GP regression with an RBF kernel and mean-centered targets.

    Jitter (relative to the signal variance) escalates 1e-8 -> 1e-6 -> 1e-4
    until the training kernel factorizes.

    4 digit function signature: 5101
    """
    x = _as_rows(x)
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if x.shape[0] < 1:
        raise ConfigurationError("GPR needs at least one training sample")
    if x.shape[0] != y.size:
        raise ShapeMismatchError(f"{x.shape[0]} training rows but {y.size} targets")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ConfigurationError("GPR training data must be finite")

    y_mean = float(y.mean())
    y_centered = y - y_mean
    k = gpr_kernel(x, x, hyper)
    n = x.shape[0]

    for rel_jitter in GPR_JITTER_LADDER:
        jitter = rel_jitter * hyper.signal_variance
        try:
            chol = cholesky(k + (hyper.noise_variance + jitter) * np.eye(n), lower=True)
        except LinAlgError:
            logger.debug(f"[GPR 5101:10] :: Cholesky failed with jitter {jitter:.1e}, escalating")
            continue
        alpha = cho_solve((chol, True), y_centered)
        return GprModel(x, y_centered, y_mean, hyper, chol, alpha, jitter)

    raise GprFitError(f"training kernel not positive definite after jitter ladder {GPR_JITTER_LADDER}")


def gpr_predict(model: GprModel, x_star) -> Tuple[np.ndarray, np.ndarray]:
    """
    Posterior mean and variance at the query rows.

    4 digit function signature: 5102
    """
    x_star = _as_rows(x_star)
    if x_star.shape[0] == 0:
        return np.zeros(0), np.zeros(0)
    if x_star.shape[1] != model.x.shape[1]:
        raise ShapeMismatchError(
            f"query has {x_star.shape[1]} features, model was trained on {model.x.shape[1]}")
    k_star = gpr_kernel(model.x, x_star, model.hyper)
    mean = model.y_mean + k_star.T @ model.alpha
    v = solve_triangular(model.chol, k_star, lower=True)
    variance = model.hyper.signal_variance - np.sum(v * v, axis=0)
    if np.any(variance < -VARIANCE_CLAMP_TOL * model.hyper.signal_variance):
        logger.warning(f"[GPR 5102:10] :: Negative posterior variance {variance.min():.3e} clamped to 0")
    return mean, np.maximum(variance, 0.0)


def log_marginal_likelihood(model: GprModel) -> float:
    n = model.y_centered.size
    return float(
        -0.5 * model.y_centered @ model.alpha
        - np.sum(np.log(np.diag(model.chol)))
        - 0.5 * n * np.log(2.0 * np.pi)
    )


def median_distance(x) -> float:
    x = _as_rows(x)
    if x.shape[0] < 2:
        return 1.0
    distances = pdist(x)
    distances = distances[distances > 0]
    return float(np.median(distances)) if distances.size else 1.0


def default_hyper_grid(x, y) -> Sequence[GprHyper]:
    """
    Lengthscales around the median pairwise distance, noise as a fraction of
    the target variance, signal variance equal to the target variance.
    """
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    var_y = float(y.var()) if y.size > 1 else 0.0
    var_y = max(var_y, 1e-12)
    med = median_distance(x)
    return [
        GprHyper(lengthscale=med * lf, signal_variance=var_y, noise_variance=nf * var_y)
        for lf, nf in product(GPR_LENGTHSCALE_FACTORS, GPR_NOISE_FACTORS)
    ]


def select_hyperparameters(x, y, grid: Optional[Sequence[GprHyper]] = None) -> GprHyper:
    """
    Grid search of the log marginal likelihood; the first maximal point wins.

    4 digit function signature: 5105
    """
    if grid is None:
        grid = default_hyper_grid(x, y)
    if len(grid) == 0:
        raise ConfigurationError("GPR hyperparameter grid is empty")

    best, best_lml = None, -np.inf
    for hyper in grid:
        try:
            lml = log_marginal_likelihood(gpr_fit(x, y, hyper))
        except GprFitError as e:
            logger.debug(f"[GPR 5105:10] :: Grid point {hyper} skipped: {e}")
            continue
        if best is None or lml > best_lml:
            best, best_lml = hyper, lml

    if best is None:
        raise HyperparameterSelectionError("every GPR grid point failed to factorize")
    logger.debug(f"[GPR 5105:20] :: Selected {best} | lml={best_lml:.4f}")
    return best
