# src/adapt/solver.py

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, eigh

from src.adapt.kernel import KernelSpec, centering_matrix, rbf_kernel, standardization, standardize
from src.adapt.params import AdaptParams
from src.config import DEFAULT_PENCIL_SCALING, PENCIL_JITTER, PENCIL_SCALINGS
from src.errors import ConfigurationError, ContractViolationError, ShapeMismatchError, SolverError
from src.logger_config import logger
from src.mmd.matrices import MmdMatrices


@dataclass(frozen=True)
class AdaptationModel:
    """
    Adaptation matrix A (N x k') over the kernel of the training rows.

    Columns are ordered by ascending eigenvalue and satisfy A^T KHK A = I.
    weights scale each component of A^T K before it reaches the regressor.
    """
    a: np.ndarray
    eigenvalues: np.ndarray
    kernel: Optional[KernelSpec] = None
    training_inputs: Optional[np.ndarray] = None
    center: Optional[np.ndarray] = None
    scale: Optional[np.ndarray] = None
    rounds: int = 1
    weights: Optional[np.ndarray] = None

    @property
    def dim(self) -> int:
        return self.a.shape[1]

    @property
    def coordinate_weights(self) -> np.ndarray:
        if self.weights is None:
            return np.ones(self.dim)
        return self.weights


def _symmetric(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


def _fix_signs(a: np.ndarray) -> np.ndarray:
    rows = np.argmax(np.abs(a), axis=0)
    signs = np.sign(a[rows, np.arange(a.shape[1])])
    signs[signs == 0] = 1.0
    return a * signs[None, :]


def adaptation_pencil(kernel_matrix, mmd: MmdMatrices, lam: float, scaling: str = DEFAULT_PENCIL_SCALING):
    """
    Left (K M K + lam I) and right (K H K) matrices of the eigen-pencil.

    scaling="relative" divides M by its Frobenius norm and multiplies lam by
    tr(K H K) / N. Rescaling K then leaves the eigenvalues unchanged, and
    the MMD term keeps the same weight against lam at every kernel width.
    """
    if scaling not in PENCIL_SCALINGS:
        raise ConfigurationError(f"pencil scaling must be one of {list(PENCIL_SCALINGS)}, got {scaling!r}")
    k = np.asarray(kernel_matrix, dtype=np.float64)
    n = k.shape[0]
    if k.ndim != 2 or k.shape[1] != n:
        raise ShapeMismatchError(f"kernel matrix must be square, got shape {k.shape}")
    m = mmd.total()
    if m.shape != (n, n):
        raise ShapeMismatchError(f"MMD matrix {m.shape} does not match kernel matrix {k.shape}")
    right = _symmetric(k @ centering_matrix(n) @ k)
    if scaling == "relative":
        norm = float(np.linalg.norm(m, ord="fro"))
        if norm > 0:
            m = m / norm
        lam = lam * max(float(np.trace(right)), 0.0) / n
    left = _symmetric(k @ m @ k) + lam * np.eye(n)
    return left, right


def _solve_reversed(left, right, k, rank_tol):
    n = left.shape[0]
    try:
        psi, v = eigh(right, left, subset_by_index=[n - k, n - 1])
    except LinAlgError as e:
        raise SolverError(f"generalized eigensolve failed: {e}")
    # descending psi is ascending phi
    psi, v = psi[::-1], v[:, ::-1]
    psi_max = psi[0] if psi.size else 0.0
    if psi_max <= 0:
        raise SolverError("centered kernel has no positive-variance direction")
    keep = psi > rank_tol * psi_max
    if not np.all(keep):
        logger.debug(f"[ADAPT 4201:20] :: Subspace dimension capped at {int(keep.sum())} of {k} requested")
    psi, v = psi[keep], v[:, keep]
    return 1.0 / psi, v / np.sqrt(psi)[None, :]


def _solve_direct(left, right, k):
    try:
        phi, a = eigh(left, right, subset_by_index=[0, k - 1])
        if np.all(np.isfinite(phi)) and np.all(np.isfinite(a)):
            return phi, a
    except LinAlgError:
        pass
    logger.debug(f"[ADAPT 4201:30] :: Right-hand matrix indefinite, adding {PENCIL_JITTER:.0e} jitter")
    try:
        return eigh(left, right + PENCIL_JITTER * np.eye(right.shape[0]), subset_by_index=[0, k - 1])
    except LinAlgError as e:
        raise SolverError(f"eigen-pencil still singular after jitter: {e}")


def _coordinate_weights(phi: np.ndarray, rank_tol: float, whiten: bool) -> np.ndarray:
    if whiten or phi.size == 0:
        return np.ones(phi.size)
    floor = rank_tol * float(np.max(np.abs(phi)))
    return 1.0 / np.sqrt(np.maximum(phi, floor if floor > 0 else 1.0))


def solve_adaptation(kernel_matrix, mmd: MmdMatrices, params: AdaptParams, training_inputs=None,
                     kernel: Optional[KernelSpec] = None, center=None, scale=None) -> AdaptationModel:
    """
    Solve (K M K + lam I) a = K H K a phi for the k smallest phi.

    With lam > 0 the pencil is solved reversed, (K H K) v = psi (K M K + lam I) v,
    with phi = 1/psi and a = v / sqrt(psi); directions of vanishing centered
    variance are dropped. With lam = 0 the direct form is used.

    4 digit function signature: 4201
    """
    k = int(params.k)
    n = np.asarray(kernel_matrix).shape[0]
    if k > n:
        raise ConfigurationError(f"subspace dimension k={k} exceeds the sample count N={n}")
    left, right = adaptation_pencil(kernel_matrix, mmd, params.lam, params.pencil_scaling)
    if not np.trace(right) > 0:
        raise SolverError("centered kernel has no positive-variance direction")

    if params.lam > 0:
        phi, a = _solve_reversed(left, right, k, params.rank_tol)
    else:
        phi, a = _solve_direct(left, right, k)

    if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(a))):
        raise SolverError("eigen-pencil produced non-finite values")
    a = _fix_signs(a)
    logger.debug(f"[ADAPT 4201:40] :: k'={a.shape[1]} | phi[0]={phi[0]:.4e} | phi[-1]={phi[-1]:.4e}")
    return AdaptationModel(a=a, eigenvalues=phi, kernel=kernel, training_inputs=training_inputs,
                           center=center, scale=scale,
                           weights=_coordinate_weights(phi, params.rank_tol, params.whiten))


def fit_adaptation(x, mmd: MmdMatrices, params: AdaptParams, kernel: KernelSpec) -> AdaptationModel:
    """Standardize the rows, build the kernel and solve."""
    x = np.asarray(x, dtype=np.float64)
    center, scale = standardization(x)
    kernel_matrix = rbf_kernel(standardize(x, center, scale), standardize(x, center, scale), kernel)
    return solve_adaptation(kernel_matrix, mmd, params, training_inputs=x, kernel=kernel,
                            center=center, scale=scale)


def _training_kernel(model: AdaptationModel, rows) -> np.ndarray:
    if model.training_inputs is None or model.kernel is None:
        raise ContractViolationError("model carries no training inputs or kernel to embed with")
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    if rows.shape[1] != model.training_inputs.shape[1]:
        raise ShapeMismatchError(
            f"rows have {rows.shape[1]} features, model was trained on {model.training_inputs.shape[1]}")
    center, scale = model.center, model.scale
    if center is None or scale is None:
        center, scale = standardization(model.training_inputs)
    return rbf_kernel(standardize(model.training_inputs, center, scale), standardize(rows, center, scale),
                      model.kernel)


def embed(model: AdaptationModel, rows) -> np.ndarray:
    """
    A^T K(training, rows), one column per row.

    4 digit function signature: 4203
    """
    return model.a.T @ _training_kernel(model, rows)


def latent_coordinates(model: AdaptationModel, kernel_columns) -> np.ndarray:
    """
    Regressor inputs for kernel columns K(training, rows): A^T K with every
    component multiplied by its weight, one row per sample. Unwhitened
    weights are 1/sqrt(phi), so the centered variance of component j on the
    training rows is 1/phi_j.

    4 digit function signature: 4205
    """
    kernel_columns = np.asarray(kernel_columns, dtype=np.float64)
    if kernel_columns.shape[0] != model.a.shape[0]:
        raise ShapeMismatchError(
            f"kernel has {kernel_columns.shape[0]} training rows, model expects {model.a.shape[0]}")
    return (model.coordinate_weights[:, None] * (model.a.T @ kernel_columns)).T


def constraint_error(model: AdaptationModel) -> float:
    """max |A^T K H K A - I| on the training rows."""
    kernel_matrix = _training_kernel(model, model.training_inputs)
    right = kernel_matrix @ centering_matrix(kernel_matrix.shape[0]) @ kernel_matrix
    gram = model.a.T @ right @ model.a
    return float(np.max(np.abs(gram - np.eye(model.dim))))


def with_rounds(model: AdaptationModel, rounds: int) -> AdaptationModel:
    return replace(model, rounds=rounds)
