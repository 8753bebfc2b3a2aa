# src/dataset/synthetic.py

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from src.config import (
    DEFAULT_N_SENSORS,
    DEFAULT_LABEL_GRID,
    DEFAULT_PANEL_SEED,
    ALPHA_RANGE,
    BETA_RANGE,
    TAU_RANGE,
    BETA_SHIFT_SPREAD,
    DEFAULT_STRAIN_SCALE,
    IRREGULAR_CONCENTRATION,
)
from src.dataset.domain import RegressionDomain
from src.errors import ConfigurationError
from src.logger_config import logger


@dataclass(frozen=True)
class SyntheticPanelConfig:
    """
    Parameters of one synthetic panel domain.

    The nominal panel (panel_seed) is shared by every domain; domain_seed and
    shift_magnitude perturb it into a different damage location.
    """
    n_sensors: int = DEFAULT_N_SENSORS
    label_grid: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_LABEL_GRID))
    domain_seed: int = 0
    shift_magnitude: float = 0.0
    panel_seed: int = DEFAULT_PANEL_SEED
    strain_scale: float = DEFAULT_STRAIN_SCALE
    name: str = "synthetic"

    def __post_init__(self):
        try:
            start = float(self.label_grid["start"])
            stop = float(self.label_grid["stop"])
            step = float(self.label_grid["step"])
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigurationError(f"label_grid needs numeric start/stop/step: {e}")
        if not start < stop:
            raise ConfigurationError(f"label grid start {start} must be below stop {stop}")
        if step <= 0:
            raise ConfigurationError(f"label grid step must be positive, got {step}")
        if start < 0:
            raise ConfigurationError(f"crack lengths cannot be negative, grid starts at {start}")
        if int(self.n_sensors) < 1:
            raise ConfigurationError(f"n_sensors must be >= 1, got {self.n_sensors}")
        if self.shift_magnitude < 0:
            raise ConfigurationError(f"shift_magnitude must be >= 0, got {self.shift_magnitude}")
        if self.strain_scale <= 0:
            raise ConfigurationError(f"strain_scale must be positive, got {self.strain_scale}")

    def grid_labels(self) -> np.ndarray:
        start = float(self.label_grid["start"])
        stop = float(self.label_grid["stop"])
        step = float(self.label_grid["step"])
        n = int(round((stop - start) / step)) + 1
        return start + step * np.arange(n, dtype=np.float64)


def synthetic_parameters(config: SyntheticPanelConfig) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Per-sensor response parameters (alpha, beta, tau) of a domain.

    4 digit function signature: 2311
    """
    m = int(config.n_sensors)
    panel_rng = np.random.default_rng(config.panel_seed)
    alpha0 = panel_rng.uniform(*ALPHA_RANGE, size=m)
    beta0 = panel_rng.uniform(*BETA_RANGE, size=m)
    tau0 = panel_rng.uniform(*TAU_RANGE, size=m)

    domain_rng = np.random.default_rng(config.domain_seed)
    u, v, w = domain_rng.uniform(-1.0, 1.0, size=(3, m))
    shift = float(config.shift_magnitude)

    alpha = alpha0 * np.exp(shift * u)
    beta = beta0 + BETA_SHIFT_SPREAD * shift * v
    tau = tau0 * np.exp(shift * w)
    return alpha, beta, tau


def _response(config: SyntheticPanelConfig, labels: np.ndarray) -> np.ndarray:
    alpha, beta, tau = synthetic_parameters(config)
    y = labels[:, None]
    # saturating, monotone in y for alpha > 0
    return config.strain_scale * (beta[None, :] + alpha[None, :] * y / (1.0 + y / tau[None, :]))


def generate_synthetic_domain(config: SyntheticPanelConfig) -> RegressionDomain:
    """
    Strain-like responses of a panel sensor network on the label grid.

    4 digit function signature: 2312
    """
    labels = config.grid_labels()
    features = _response(config, labels)
    logger.debug(
        f"[DATASET 2312:10] :: Generated '{config.name}' | n={labels.size} | "
        f"m={config.n_sensors} | seed={config.domain_seed} | shift={config.shift_magnitude}"
    )
    return RegressionDomain(features, labels, config.name)


def generate_irregular_domain(config: SyntheticPanelConfig, n_samples: int, min_label: Optional[float] = None,
                              concentration: float = IRREGULAR_CONCENTRATION) -> RegressionDomain:
    """
    Same response family with randomly spaced crack lengths, used to emulate
    a large measured target (non-uniform spacing between inspections).

    Labels are min_label + (stop - min_label) * Beta(1, concentration); the
    first inspection sits at min_label. concentration = 1 spaces them
    uniformly, larger values crowd them toward min_label.

    4 digit function signature: 2313
    """
    if int(n_samples) < 2:
        raise ConfigurationError(f"irregular domain needs at least 2 samples, got {n_samples}")
    if not concentration > 0:
        raise ConfigurationError(f"label concentration must be positive, got {concentration}")
    start = float(config.label_grid["start"])
    stop = float(config.label_grid["stop"])
    low = start if min_label is None else float(min_label)
    if not start <= low < stop:
        raise ConfigurationError(f"minimum label {low} must lie in [{start}, {stop})")

    rng = np.random.default_rng([int(config.domain_seed), int(n_samples)])
    draws = rng.beta(1.0, float(concentration), size=int(n_samples))
    draws[0] = 0.0
    labels = np.sort(low + (stop - low) * draws)
    features = _response(config, labels)
    logger.debug(
        f"[DATASET 2313:10] :: Generated irregular '{config.name}' | n={n_samples} | "
        f"min={low} | concentration={concentration}")
    return RegressionDomain(features, labels, config.name)


def add_noise(domain: RegressionDomain, sigma_eps: float, seed: int) -> RegressionDomain:
    """
    Additive zero-mean Gaussian measurement noise on every feature entry.

    4 digit function signature: 2315
    """
    if sigma_eps < 0:
        raise ConfigurationError(f"noise level must be >= 0, got {sigma_eps}")
    if sigma_eps == 0:
        return domain
    rng = np.random.default_rng(seed)
    noisy = domain.features + rng.normal(0.0, sigma_eps, size=domain.features.shape)
    return domain.with_features(noisy)
