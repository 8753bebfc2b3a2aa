# src/fuzzy/percentiles.py

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.stats import gaussian_kde

from src.config import KDE_BANDWIDTH_FACTOR, KDE_GRID_POINTS, KDE_GRID_PAD
from src.errors import ConfigurationError, DegenerateInputError
from src.logger_config import logger


def check_quantiles(quantiles) -> np.ndarray:
    q = np.asarray(quantiles, dtype=np.float64)
    if q.ndim != 1 or q.size == 0:
        raise ConfigurationError(f"quantiles must be a non-empty list, got {quantiles}")
    if np.any(q <= 0) or np.any(q >= 1):
        raise ConfigurationError(f"quantiles must lie in (0, 1), got {quantiles}")
    if np.any(np.diff(q) <= 0):
        raise ConfigurationError(f"quantiles must be strictly ascending, got {quantiles}")
    return q


def kde_cdf(labels, bandwidth_factor=KDE_BANDWIDTH_FACTOR, grid_points=KDE_GRID_POINTS):
    """
    Fit a Gaussian KDE to the labels and integrate it into a CDF.

    The bandwidth follows Silverman's rule h = 1.06 * std * n^(-1/5); the CDF
    lives on a uniform grid spanning the data padded by 3h on each side.

    Returns: grid, cdf (non-decreasing, ending at 1), bandwidth.
    """
    labels = np.asarray(labels, dtype=np.float64)
    n = labels.size
    if n < 2:
        raise DegenerateInputError(f"KDE needs at least 2 labels, got {n}")
    std = labels.std(ddof=1)
    if not np.isfinite(std) or std <= 0:
        raise DegenerateInputError("KDE cannot be fitted to constant labels")

    factor = bandwidth_factor * n ** (-1.0 / 5.0)
    kde = gaussian_kde(labels, bw_method=factor)
    h = factor * std

    lo = labels.min() - KDE_GRID_PAD * h
    hi = labels.max() + KDE_GRID_PAD * h
    grid = np.linspace(lo, hi, int(grid_points))
    pdf = kde(grid)
    cdf = cumulative_trapezoid(pdf, grid, initial=0.0)
    cdf = np.maximum.accumulate(cdf)
    cdf /= cdf[-1]
    return grid, cdf, h


def kde_percentiles(labels, quantiles, bandwidth_factor=KDE_BANDWIDTH_FACTOR, grid_points=KDE_GRID_POINTS):
    """
    Percentiles of the KDE-smoothed label distribution (fuzzy-set breakpoints).

    4 digit function signature: 3101
    """
    q = check_quantiles(quantiles)
    grid, cdf, h = kde_cdf(labels, bandwidth_factor, grid_points)

    # np.interp needs strictly increasing sample points
    keep = np.concatenate(([True], np.diff(cdf) > 0))
    breakpoints = np.interp(q, cdf[keep], grid[keep])
    breakpoints = np.clip(breakpoints, 0.0, 1.0)

    if np.any(np.diff(breakpoints) <= 0):
        raise DegenerateInputError(f"percentile breakpoints collapsed: {breakpoints}")

    logger.debug(f"[FUZZY 3101:10] :: KDE h={h:.4g} | quantiles={q.tolist()} | breakpoints={breakpoints.tolist()}")
    return breakpoints
