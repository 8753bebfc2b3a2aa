# src/bench/metrics.py

import numpy as np

from src.errors import ConfigurationError, ShapeMismatchError


def rmse(y_true, y_pred) -> float:
    """
    Root mean square error over all (truth, prediction) pairs.

    4 digit function signature: 6101
    """
    y_true = np.asarray(y_true, dtype=np.float64).reshape(-1)
    y_pred = np.asarray(y_pred, dtype=np.float64).reshape(-1)
    if y_true.size != y_pred.size:
        raise ShapeMismatchError(f"rmse of {y_true.size} truths against {y_pred.size} predictions")
    if y_true.size == 0:
        raise ConfigurationError("rmse of an empty prediction set")
    return float(np.sqrt(np.mean((y_true - y_pred) ** 2)))
