# tests/test_regress.py

import os
import sys

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.linalg import LinAlgError
from scipy.stats import multivariate_normal

from src.errors import (
    ConfigurationError,
    GprFitError,
    HyperparameterSelectionError,
    ShapeMismatchError,
)
from src.regress import gpr as gpr_module
from src.regress.gpr import (
    GprHyper,
    default_hyper_grid,
    gpr_fit,
    gpr_kernel,
    gpr_predict,
    log_marginal_likelihood,
    select_hyperparameters,
)
from src.regress.regressors import GprRegressor, LeastSquaresRegressor, make_regressor


def test_noise_free_interpolation():
    model = gpr_fit([[0.0], [1.0]], [0.0, 1.0], GprHyper(lengthscale=1.0, signal_variance=1.0))
    mean, _ = gpr_predict(model, [[1.0]])
    assert mean[0] == pytest.approx(1.0, abs=1e-6)


def test_posterior_matches_dense_oracle():
    rng = np.random.default_rng(0)
    x = rng.uniform(-2, 2, size=(15, 2))
    y = np.sin(x[:, 0]) + 0.5 * x[:, 1]
    x_star = rng.uniform(-2, 2, size=(6, 2))
    hyper = GprHyper(lengthscale=0.8, signal_variance=1.3, noise_variance=1e-2)
    model = gpr_fit(x, y, hyper)
    mean, var = gpr_predict(model, x_star)

    k = gpr_kernel(x, x, hyper) + (hyper.noise_variance + model.jitter) * np.eye(15)
    k_star = gpr_kernel(x, x_star, hyper)
    oracle_mean = y.mean() + k_star.T @ np.linalg.solve(k, y - y.mean())
    oracle_var = hyper.signal_variance - np.sum(k_star * np.linalg.solve(k, k_star), axis=0)
    assert_allclose(mean, oracle_mean, rtol=0, atol=1e-8)
    assert_allclose(var, oracle_var, rtol=0, atol=1e-8)


def test_variance_vanishes_at_noise_free_training_point():
    x = np.array([[0.0], [1.0], [2.5]])
    model = gpr_fit(x, [1.0, -1.0, 0.5], GprHyper(lengthscale=1.0, signal_variance=1.0))
    _, var = gpr_predict(model, x)
    assert np.all(var >= 0.0)
    assert np.all(var <= 2e-8)


def test_log_marginal_likelihood_matches_gaussian_density():
    rng = np.random.default_rng(1)
    x = rng.uniform(0, 5, size=(12, 1))
    y = np.cos(x[:, 0])
    hyper = GprHyper(lengthscale=1.0, signal_variance=0.7, noise_variance=1e-3)
    model = gpr_fit(x, y, hyper)
    cov = gpr_kernel(x, x, hyper) + (hyper.noise_variance + model.jitter) * np.eye(12)
    expected = multivariate_normal(mean=np.zeros(12), cov=cov).logpdf(y - y.mean())
    assert log_marginal_likelihood(model) == pytest.approx(expected, rel=1e-9)


def test_empty_query_gives_empty_outputs():
    model = gpr_fit([[0.0], [1.0]], [0.0, 1.0], GprHyper(1.0, 1.0))
    mean, var = gpr_predict(model, np.zeros((0, 1)))
    assert mean.shape == (0,) and var.shape == (0,)


def test_query_dimension_mismatch():
    model = gpr_fit([[0.0], [1.0]], [0.0, 1.0], GprHyper(1.0, 1.0))
    with pytest.raises(ShapeMismatchError):
        gpr_predict(model, [[0.0, 1.0]])


@pytest.mark.parametrize("values", [(0.0, 1.0, 0.0), (1.0, -1.0, 0.0), (1.0, 1.0, -1e-3), (np.nan, 1.0, 0.0)])
def test_invalid_hyperparameters(values):
    with pytest.raises(ConfigurationError):
        GprHyper(*values)


def test_jitter_ladder_exhausted(monkeypatch):
    def always_fails(*args, **kwargs):
        raise LinAlgError("not positive definite")

    monkeypatch.setattr(gpr_module, "cholesky", always_fails)
    with pytest.raises(GprFitError):
        gpr_fit([[0.0], [1.0]], [0.0, 1.0], GprHyper(1.0, 1.0))


def test_selection_prefers_smallest_noise_on_smooth_data():
    x = np.linspace(0.0, 6.0, 20).reshape(-1, 1)
    y = np.sin(x[:, 0])
    hyper = select_hyperparameters(x, y)
    assert hyper.noise_variance == pytest.approx(1e-6 * y.var())
    assert hyper.signal_variance == pytest.approx(y.var())


def test_default_grid_shape():
    grid = default_hyper_grid(np.arange(5.0).reshape(-1, 1), np.arange(5.0))
    assert len(grid) == 15


def test_selection_errors(monkeypatch):
    with pytest.raises(ConfigurationError):
        select_hyperparameters([[0.0], [1.0]], [0.0, 1.0], grid=[])

    def always_fails(*args, **kwargs):
        raise GprFitError("boom")

    monkeypatch.setattr(gpr_module, "gpr_fit", always_fails)
    with pytest.raises(HyperparameterSelectionError):
        select_hyperparameters([[0.0], [1.0]], [0.0, 1.0])


def test_gpr_regressor_fits_and_predicts():
    x = np.linspace(0.0, 3.0, 10).reshape(-1, 1)
    y = 2.0 * x[:, 0] + 1.0
    regressor = GprRegressor().fit(x, y)
    assert_allclose(regressor.predict(x), y, atol=1e-2)
    mean, var = regressor.predict_with_variance(x[:2])
    assert mean.shape == var.shape == (2,)


def test_least_squares_recovers_affine_map():
    rng = np.random.default_rng(2)
    x = rng.normal(size=(30, 3))
    y = x @ np.array([1.0, -2.0, 0.5]) + 4.0
    regressor = LeastSquaresRegressor().fit(x, y)
    assert_allclose(regressor.predict(x[:5]), y[:5], atol=1e-10)


def test_predict_before_fit():
    with pytest.raises(ConfigurationError):
        GprRegressor().predict([[0.0]])
    with pytest.raises(ConfigurationError):
        LeastSquaresRegressor().predict([[0.0]])


def test_make_regressor():
    assert make_regressor("gpr") is GprRegressor
    assert make_regressor("linear") is LeastSquaresRegressor
    with pytest.raises(ConfigurationError):
        make_regressor("forest")
