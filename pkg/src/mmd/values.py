# src/mmd/values.py

import numpy as np

from src.config import NORMALIZATION_TOL
from src.errors import ContractViolationError, ShapeMismatchError

NEGATIVE_TOL = 1e-10


def mmd_trace_value(z, m) -> float:
    """
    tr(Z M Z^T) for embedded data Z (k x N, one column per sample).

    4 digit function signature: 3301
    """
    z = np.atleast_2d(np.asarray(z, dtype=np.float64))
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or z.shape[1] != m.shape[0]:
        raise ShapeMismatchError(f"cannot form tr(Z M Z^T) with Z {z.shape} and M {m.shape}")
    value = float(np.einsum("ij,jk,ik->", z, m, z))
    if -NEGATIVE_TOL < value < 0:
        value = 0.0
    return value


def _weights(weights, n, label) -> np.ndarray:
    if weights is None:
        return np.full(n, 1.0 / n)
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if w.size != n:
        raise ShapeMismatchError(f"{label} weights have {w.size} entries for {n} samples")
    if abs(w.sum() - 1.0) > NORMALIZATION_TOL:
        raise ContractViolationError(f"{label} weights sum to {w.sum()}, expected 1")
    return w


def direct_mmd_value(z_s, z_t, weights_s=None, weights_t=None) -> float:
    """
    Squared distance between the weighted means of the embedded source and
    target samples (columns of z_s and z_t). Uniform weights by default.
    """
    z_s = np.atleast_2d(np.asarray(z_s, dtype=np.float64))
    z_t = np.atleast_2d(np.asarray(z_t, dtype=np.float64))
    if z_s.shape[0] != z_t.shape[0]:
        raise ShapeMismatchError(f"embedding dimensions differ: {z_s.shape[0]} vs {z_t.shape[0]}")
    w_s = _weights(weights_s, z_s.shape[1], "source")
    w_t = _weights(weights_t, z_t.shape[1], "target")
    diff = z_s @ w_s - z_t @ w_t
    return float(diff @ diff)
