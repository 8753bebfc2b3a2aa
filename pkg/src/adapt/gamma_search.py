# src/adapt/gamma_search.py

from typing import Callable, List, Sequence, Tuple

import numpy as np

from src.adapt.kernel import KernelSpec
from src.adapt.ofjdar import ADAPTERS
from src.adapt.params import AdaptParams
from src.errors import ConfigurationError, OfjdarError, SolverError
from src.logger_config import logger
from src.regress.regressors import Regressor


def _adapter(method: str):
    try:
        return ADAPTERS[str(method).lower()]
    except KeyError:
        raise ConfigurationError(f"no adaptation method '{method}', choose from {sorted(ADAPTERS)}")


def gamma_scores(x_s, y_s, x_tl, y_tl, x_tu, gamma_grid: Sequence[float], holdout: int,
                 params: AdaptParams, regressor_factory: Callable[[], Regressor],
                 method: str = "ofjdar") -> List[Tuple[float, float]]:
    """
    Holdout RMSE of every candidate gamma.

    The newest `holdout` labeled target rows are treated as unlabeled and
    merged in front of x_tu; each gamma runs the full adaptation and is scored
    on them. A gamma whose adaptation fails scores inf.

    4 digit function signature: 4501
    """
    adapt = _adapter(method)
    x_tl = np.atleast_2d(np.asarray(x_tl, dtype=np.float64))
    y_tl = np.asarray(y_tl, dtype=np.float64).reshape(-1)
    n_tl = x_tl.shape[0]
    if len(gamma_grid) == 0:
        raise ConfigurationError("gamma grid is empty")
    if holdout < 1 or holdout >= n_tl:
        raise ConfigurationError(f"holdout must be in [1, n_tl - 1] = [1, {n_tl - 1}], got {holdout}")

    x_fit, y_fit = x_tl[:-holdout], y_tl[:-holdout]
    x_held, y_held = x_tl[-holdout:], y_tl[-holdout:]
    x_merged = np.vstack((x_held, np.atleast_2d(np.asarray(x_tu, dtype=np.float64))))

    scores = []
    for gamma in gamma_grid:
        try:
            _, y_hat, _ = adapt(x_s, y_s, x_fit, y_fit, x_merged, params, KernelSpec(gamma), regressor_factory)
            score = float(np.sqrt(np.mean((y_hat[:holdout] - y_held) ** 2)))
        except OfjdarError as e:
            logger.warning(f"[ADAPT 4501:20] :: gamma={gamma:.4e} failed: {e}")
            score = np.inf
        scores.append((float(gamma), score))
    return scores


def optimize_gamma(x_s, y_s, x_tl, y_tl, x_tu, gamma_grid: Sequence[float], holdout: int,
                   params: AdaptParams, regressor_factory: Callable[[], Regressor],
                   method: str = "ofjdar") -> KernelSpec:
    """
    Pick the kernel width by holdout RMSE on newly revealed target labels.

    Only exactly equal scores tie; the smallest tied gamma wins.

    4 digit function signature: 4505
    """
    scores = gamma_scores(x_s, y_s, x_tl, y_tl, x_tu, gamma_grid, holdout, params, regressor_factory, method)
    best = min(score for _, score in scores)
    if not np.isfinite(best):
        raise SolverError(f"every gamma of the grid failed for {method}")

    chosen = min(gamma for gamma, score in scores if score == best)
    logger.debug(f"[ADAPT 4505:10] :: {method} gamma={chosen:.4e} | best holdout rmse={best:.4e}")
    return KernelSpec(chosen)
