# src/mmd/matrices.py

from dataclasses import dataclass, field
from typing import List

import numpy as np

from src.config import NORMALIZATION_TOL
from src.errors import ConfigurationError, ContractViolationError
from src.fuzzy.membership import MembershipMatrix
from src.logger_config import logger


@dataclass(frozen=True)
class MmdMatrices:
    """Marginal MMD matrix m0 and the fuzzy conditional matrices m_c."""
    m0: np.ndarray
    m_c: List[np.ndarray] = field(default_factory=list)
    n_s: int = 0
    n_t: int = 0

    @property
    def n_classes(self) -> int:
        return len(self.m_c)

    def total(self) -> np.ndarray:
        total = self.m0.copy()
        for m in self.m_c:
            total += m
        return total


def marginal_mmd_matrix(n_s: int, n_t: int) -> np.ndarray:
    """
    M0 = e e^T with e = [1/n_s, ..., -1/n_t, ...]; the cross entries are
    -1/(n_s n_t) so that tr(Z M0 Z^T) is the squared mean difference.

    4 digit function signature: 3201
    """
    if n_s < 1 or n_t < 1:
        raise ConfigurationError(f"MMD needs n_s >= 1 and n_t >= 1, got n_s={n_s}, n_t={n_t}")
    e = np.concatenate((np.full(n_s, 1.0 / n_s), np.full(n_t, -1.0 / n_t)))
    return np.outer(e, e)


def _normalized_values(mu, label) -> np.ndarray:
    if isinstance(mu, MembershipMatrix):
        values = mu.mu
    else:
        values = np.asarray(mu, dtype=np.float64)
    if values.ndim != 2:
        raise ContractViolationError(f"{label} memberships must be a 2-D matrix, got shape {values.shape}")
    sums = values.sum(axis=0)
    if np.any(np.abs(sums - 1.0) > NORMALIZATION_TOL):
        raise ContractViolationError(
            f"{label} memberships are not normalized per class (column sums {sums.round(6).tolist()})")
    return values


def conditional_mmd_matrices(mu_s_norm, mu_t_norm) -> List[np.ndarray]:
    """
    Fuzzy conditional MMD matrices: for class c the weight vector is
    w_c = [mu_s[:, c]; -mu_t[:, c]] and M_c = w_c w_c^T.

    4 digit function signature: 3202
    """
    mu_s = _normalized_values(mu_s_norm, "source")
    mu_t = _normalized_values(mu_t_norm, "target")
    if mu_s.shape[1] != mu_t.shape[1]:
        raise ContractViolationError(
            f"source has {mu_s.shape[1]} fuzzy classes, target has {mu_t.shape[1]}")
    matrices = []
    for c in range(mu_s.shape[1]):
        w = np.concatenate((mu_s[:, c], -mu_t[:, c]))
        matrices.append(np.outer(w, w))
    return matrices


def class_mmd_matrix(labels_s, labels_t, c) -> np.ndarray:
    """
    Primal JDA class-conditional MMD matrix for crisp class labels, with the
    cross entries read as -1/(n_s^(c) n_t^(c)). Reference for the fuzzy form.
    """
    labels_s = np.asarray(labels_s)
    labels_t = np.asarray(labels_t)
    in_s = labels_s == c
    in_t = labels_t == c
    n_sc, n_tc = int(in_s.sum()), int(in_t.sum())
    e = np.zeros(labels_s.size + labels_t.size)
    if n_sc:
        e[:labels_s.size][in_s] = 1.0 / n_sc
    if n_tc:
        e[labels_s.size:][in_t] = -1.0 / n_tc
    return np.outer(e, e)


def build_mmd_matrices(n_s: int, n_t: int, mu_s_norm=None, mu_t_norm=None) -> MmdMatrices:
    """4 digit function signature: 3205"""
    m0 = marginal_mmd_matrix(n_s, n_t)
    m_c = []
    if mu_s_norm is not None and mu_t_norm is not None:
        m_c = conditional_mmd_matrices(mu_s_norm, mu_t_norm)
        if m_c and m_c[0].shape != m0.shape:
            raise ContractViolationError(
                f"membership rows ({m_c[0].shape[0]}) do not match n_s + n_t ({m0.shape[0]})")
    logger.debug(f"[MMD 3205:10] :: Built MMD matrices | n_s={n_s} | n_t={n_t} | C={len(m_c)}")
    return MmdMatrices(m0, m_c, int(n_s), int(n_t))


def matrix_properties(matrix) -> dict:
    """Symmetry error, largest absolute row sum and smallest eigenvalue."""
    matrix = np.asarray(matrix, dtype=np.float64)
    return {
        "symmetry_error": float(np.max(np.abs(matrix - matrix.T))) if matrix.size else 0.0,
        "max_row_sum": float(np.max(np.abs(matrix.sum(axis=1)))) if matrix.size else 0.0,
        "min_eigenvalue": float(np.linalg.eigvalsh(matrix).min()) if matrix.size else 0.0,
    }
