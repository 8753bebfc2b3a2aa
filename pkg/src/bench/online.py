# src/bench/online.py

import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from src.adapt.gamma_search import optimize_gamma
from src.adapt.kernel import KernelSpec, default_gamma_grid
from src.adapt.ofjdar import ADAPTERS
from src.adapt.params import AdaptParams
from src.bench.methods import MethodId, fit_baseline
from src.bench.metrics import rmse
from src.config import DEFAULT_GAMMA_EXPONENTS, DEFAULT_REGRESSOR
from src.dataset.domain import RegressionDomain
from src.dataset.schedule import OnlineSchedule
from src.logger_config import logger
from src.regress.regressors import make_regressor


@dataclass(frozen=True)
class TaskSettings:
    params: AdaptParams = field(default_factory=AdaptParams)
    gamma_exponents: Tuple[int, ...] = DEFAULT_GAMMA_EXPONENTS
    optimize_gamma: bool = True
    regressor: str = DEFAULT_REGRESSOR


@dataclass(frozen=True)
class StepRecord:
    step: int
    n_tl: int
    indices: Tuple[int, ...]
    y_pred: np.ndarray
    y_true: np.ndarray
    gamma: Optional[float]
    wall_time: float


@dataclass
class PredictionLog:
    method: MethodId
    schedule: dict
    source: str = ""
    target: str = ""
    seed: int = 0
    records: List[StepRecord] = field(default_factory=list)
    status: str = "ok"
    reason: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def predictions(self) -> np.ndarray:
        if not self.records:
            return np.zeros(0)
        return np.concatenate([r.y_pred for r in self.records])

    def truths(self) -> np.ndarray:
        if not self.records:
            return np.zeros(0)
        return np.concatenate([r.y_true for r in self.records])

    def rmse(self) -> float:
        if not self.ok:
            return float("nan")
        return rmse(self.truths(), self.predictions())

    def mark_failed(self, reason: str):
        self.status = "failed"
        self.reason = reason


def _adaptation_kernel(method: MethodId, d_s: RegressionDomain, d_tl: RegressionDomain, x_tu,
                       delta_n: int, settings: TaskSettings, factory) -> KernelSpec:
    grid = default_gamma_grid(np.vstack((d_s.features, d_tl.features, x_tu)), settings.gamma_exponents)
    n_tl = d_tl.n_samples
    if not settings.optimize_gamma:
        return KernelSpec(grid[len(grid) // 2])
    if n_tl < 2:
        logger.warning(f"[BENCH 6301:20] :: {method.value} n_tl={n_tl}, gamma search skipped (middle of grid)")
        return KernelSpec(grid[len(grid) // 2])
    holdout = min(delta_n, n_tl - 1)
    return optimize_gamma(d_s.features, d_s.labels, d_tl.features, d_tl.labels, x_tu, grid, holdout,
                          settings.params, factory, method.value.lower())


def predict_batch(method: MethodId, d_s: RegressionDomain, d_tl: RegressionDomain, x_tu,
                  delta_n: int, settings: TaskSettings) -> Tuple[np.ndarray, Optional[float]]:
    """
    Predictions for one unlabeled batch. Only revealed target labels (d_tl)
    and the batch's features are visible here.

    4 digit function signature: 6302
    """
    factory = make_regressor(settings.regressor)
    if not method.adapts:
        regressor = fit_baseline(method, d_s, d_tl, factory)
        return np.asarray(regressor.predict(x_tu), dtype=np.float64), None

    kernel = _adaptation_kernel(method, d_s, d_tl, x_tu, delta_n, settings, factory)
    adapt = ADAPTERS[method.value.lower()]
    _, y_hat, _ = adapt(d_s.features, d_s.labels, d_tl.features, d_tl.labels, x_tu,
                        settings.params, kernel, factory)
    return np.asarray(y_hat, dtype=np.float64), kernel.gamma


def run_online_task(d_s: RegressionDomain, d_t: RegressionDomain, method, schedule: OnlineSchedule,
                    settings: Optional[TaskSettings] = None, seed: int = 0) -> PredictionLog:
    """
    Replay the online protocol: predict each unlabeled batch, then reveal it.

    A failing step marks the log failed and stops the task; the records up to
    that step are kept.

    4 digit function signature: 6301
    """
    method = MethodId.parse(method)
    settings = settings or TaskSettings()
    log = PredictionLog(method=method, schedule=schedule.summary(), source=d_s.name, target=d_t.name, seed=seed)

    for step, (labeled, unlabeled) in enumerate(schedule.batches):
        d_tl = d_t.subset(np.arange(labeled.start, labeled.stop))
        unlabeled_idx = np.arange(unlabeled.start, unlabeled.stop)
        x_tu = d_t.features[unlabeled_idx]

        started = time.perf_counter()
        try:
            y_pred, gamma = predict_batch(method, d_s, d_tl, x_tu, schedule.delta_n, settings)
        except Exception as e:
            logger.exception(
                f"[BENCH 6301:90] :: {method.value} {d_s.name}->{d_t.name} failed at step {step}: {e}")
            log.mark_failed(f"step {step}: {type(e).__name__}: {e}")
            break
        elapsed = time.perf_counter() - started

        # labels are revealed only after the prediction is stored
        log.records.append(StepRecord(
            step=step,
            n_tl=d_tl.n_samples,
            indices=tuple(int(i) for i in unlabeled_idx),
            y_pred=y_pred,
            y_true=np.array(d_t.labels[unlabeled_idx]),
            gamma=gamma,
            wall_time=elapsed,
        ))

    if log.ok:
        logger.info(
            f"[BENCH 6301:10] :: {method.value} {d_s.name}->{d_t.name} | dN={schedule.delta_n} | "
            f"seed={seed} | steps={len(log.records)} | rmse={log.rmse():.4f}")
    return log
