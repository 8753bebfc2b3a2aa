# src/adapt/ofjdar.py

from dataclasses import replace
from typing import Callable, Optional, Tuple

import numpy as np

from src.adapt.kernel import KernelSpec, rbf_kernel, standardization, standardize
from src.adapt.params import AdaptParams
from src.adapt.solver import AdaptationModel, latent_coordinates, solve_adaptation, with_rounds
from src.dataset.domain import scale_labels
from src.errors import ConfigurationError, DegenerateInputError, ShapeMismatchError
from src.fuzzy.membership import fuzzy_memberships, normalize_memberships
from src.logger_config import logger
from src.mmd.matrices import MmdMatrices, build_mmd_matrices
from src.regress.regressors import Regressor

RoundObserver = Callable[[int, MmdMatrices, AdaptationModel], None]


def _rows(x, label) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    if x.ndim != 2:
        raise ShapeMismatchError(f"{label} must be a 2-D matrix, got shape {x.shape}")
    if x.shape[0] < 1:
        raise ConfigurationError(f"{label} needs at least one sample")
    if not np.all(np.isfinite(x)):
        raise ConfigurationError(f"{label} contains non-finite values")
    return x


def _labels(y, n, label) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.size != n:
        raise ShapeMismatchError(f"{label} has {y.size} labels for {n} samples")
    if not np.all(np.isfinite(y)):
        raise ConfigurationError(f"{label} contains non-finite labels")
    return y


def _validate(x_s, y_s, x_tl, y_tl, x_tu):
    x_s = _rows(x_s, "source features")
    x_tl = _rows(x_tl, "labeled target features")
    x_tu = _rows(x_tu, "unlabeled target features")
    if not x_s.shape[1] == x_tl.shape[1] == x_tu.shape[1]:
        raise ShapeMismatchError(
            f"feature dimensions differ: source {x_s.shape[1]}, labeled target {x_tl.shape[1]}, "
            f"unlabeled target {x_tu.shape[1]}")
    y_s = _labels(y_s, x_s.shape[0], "source")
    y_tl = _labels(y_tl, x_tl.shape[0], "labeled target")
    return x_s, y_s, x_tl, y_tl, x_tu


def round_mmd(y_s, y_t, params: AdaptParams) -> MmdMatrices:
    """
    Marginal plus fuzzy-conditional MMD matrices for one refinement round.

    Labels (true and pseudo) are scaled jointly to [0, 1]; the KDE partition
    and the normalization are per domain. A degenerate fuzzy class or label
    set yields the marginal matrix alone.

    4 digit function signature: 4405
    """
    n_s, n_t = y_s.size, y_t.size
    if params.n_classes == 0:
        return build_mmd_matrices(n_s, n_t)
    try:
        scaled, _ = scale_labels(np.concatenate((y_s, y_t)))
        quantiles = params.class_quantiles()
        mu_s = normalize_memberships(fuzzy_memberships(scaled[:n_s], quantiles))
        mu_t = normalize_memberships(fuzzy_memberships(scaled[n_s:], quantiles))
    except DegenerateInputError as e:
        logger.warning(f"[ADAPT 4405:20] :: Fuzzy classes unavailable ({e}), marginal-only round")
        return build_mmd_matrices(n_s, n_t)
    return build_mmd_matrices(n_s, n_t, mu_s, mu_t)


def _label_span(y) -> float:
    span = float(np.max(y) - np.min(y))
    return span if span > 0 else 1.0


def ofjdar(x_s, y_s, x_tl, y_tl, x_tu, params: AdaptParams, kernel: KernelSpec,
           regressor_factory: Callable[[], Regressor],
           on_round: Optional[RoundObserver] = None) -> Tuple[AdaptationModel, np.ndarray, Regressor]:
    """
    Joint marginal and fuzzy-conditional adaptation with pseudo-label
    refinement of the unlabeled target rows.

    The regressor is trained on the latent coordinates of the labeled rows
    (source plus revealed target); only the unlabeled rows' pseudo labels are refreshed.
    The loop stops once the pseudo labels move less than params.tol
    (scaled-label units) or after params.max_iters rounds.

    4 digit function signature: 4410
    """
    x_s, y_s, x_tl, y_tl, x_tu = _validate(x_s, y_s, x_tl, y_tl, x_tu)
    n_s, n_tl, n_tu = x_s.shape[0], x_tl.shape[0], x_tu.shape[0]
    n_l = n_s + n_tl

    x_all = np.vstack((x_s, x_tl, x_tu))
    x_l = x_all[:n_l]
    y_l = np.concatenate((y_s, y_tl))

    center, scale = standardization(x_all)
    z_all = standardize(x_all, center, scale)
    kernel_matrix = rbf_kernel(z_all, z_all, kernel)

    y_tu = np.asarray(regressor_factory().fit(x_l, y_l).predict(x_tu), dtype=np.float64)

    model, regressor = None, None
    rounds = 0
    for rounds in range(1, int(params.max_iters) + 1):
        mmd = round_mmd(y_s, np.concatenate((y_tl, y_tu)), params)
        model = solve_adaptation(kernel_matrix, mmd, params, training_inputs=x_all, kernel=kernel,
                                 center=center, scale=scale)
        embedded = latent_coordinates(model, kernel_matrix)
        regressor = regressor_factory().fit(embedded[:n_l], y_l)
        y_next = np.asarray(regressor.predict(embedded[n_l:]), dtype=np.float64)

        if on_round is not None:
            on_round(rounds, mmd, model)

        change = float(np.linalg.norm(y_next - y_tu)) / _label_span(np.concatenate((y_l, y_next)))
        y_tu = y_next
        logger.debug(f"[ADAPT 4410:20] :: round {rounds} | C={mmd.n_classes} | pseudo-label change={change:.3e}")
        if change < params.tol:
            break

    return with_rounds(model, rounds), y_tu, regressor


def otcar(x_s, y_s, x_tl, y_tl, x_tu, params: AdaptParams, kernel: KernelSpec,
          regressor_factory: Callable[[], Regressor],
          on_round: Optional[RoundObserver] = None) -> Tuple[AdaptationModel, np.ndarray, Regressor]:
    """Marginal-only adaptation, one shot. 4 digit function signature: 4420"""
    marginal = replace(params, n_classes=0, max_iters=1)
    return ofjdar(x_s, y_s, x_tl, y_tl, x_tu, marginal, kernel, regressor_factory, on_round)


ADAPTERS = {
    "ofjdar": ofjdar,
    "otcar": otcar,
}
