# src/bench/matrix.py

from dataclasses import dataclass, field
from itertools import permutations, product
from multiprocessing import Pool
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from src.adapt.params import load_adapt_params
from src.bench.methods import MethodId
from src.bench.online import PredictionLog, TaskSettings, run_online_task
from src.config import (
    DEFAULT_DELTA_N,
    DEFAULT_GAMMA_EXPONENTS,
    DEFAULT_N_TL0,
    DEFAULT_NOISE_LEVELS,
    DEFAULT_REGRESSOR,
    DEFAULT_WORKERS,
    IRREGULAR_CONCENTRATION,
)
from src.dataset.domain import RegressionDomain, damage_index_domain
from src.dataset.loaders import load_domain
from src.dataset.schedule import online_split
from src.dataset.synthetic import (
    SyntheticPanelConfig,
    add_noise,
    generate_irregular_domain,
    generate_synthetic_domain,
)
from src.errors import ConfigurationError
from src.logger_config import logger
from src.regress.regressors import make_regressor
from utils.config_watcher import ConfigWatcher

SYNTHETIC_KEYS = ("n_sensors", "label_grid", "domain_seed", "shift_magnitude", "panel_seed", "strain_scale")
AGGREGATE_KEYS = ["source", "target", "method", "delta_n", "noise"]


@dataclass(frozen=True)
class ExperimentConfig:
    domains: Tuple[dict, ...]
    methods: Tuple[MethodId, ...] = tuple(MethodId)
    pairs: Optional[Tuple[Tuple[str, str], ...]] = None
    delta_n: Tuple[int, ...] = DEFAULT_DELTA_N
    noise: Tuple[float, ...] = DEFAULT_NOISE_LEVELS
    seeds: Tuple[int, ...] = (0,)
    n_tl0: int = DEFAULT_N_TL0
    damage_index: bool = False
    vary_domains_with_seed: bool = False
    adapt: dict = field(default_factory=dict)
    gamma_exponents: Tuple[int, ...] = DEFAULT_GAMMA_EXPONENTS
    optimize_gamma: bool = True
    regressor: str = DEFAULT_REGRESSOR
    workers: int = DEFAULT_WORKERS

    def __post_init__(self):
        names = [d.get("name") for d in self.domains]
        if len(names) < 2:
            raise ConfigurationError("an experiment needs at least two domains")
        if any(not n for n in names) or len(set(names)) != len(names):
            raise ConfigurationError(f"domain names must be present and unique, got {names}")
        for spec in self.domains:
            if "path" not in spec and "domain_seed" not in spec:
                raise ConfigurationError(f"domain '{spec['name']}' needs either 'path' or 'domain_seed'")
        for source, target in self.task_pairs():
            if source not in names or target not in names:
                raise ConfigurationError(f"pair ({source}, {target}) references an unknown domain")
            if source == target:
                raise ConfigurationError(f"pair ({source}, {target}) uses one domain twice")
        if not self.methods or not self.delta_n or not self.noise or not self.seeds:
            raise ConfigurationError("methods, delta_n, noise and seeds must be non-empty")
        if any(int(d) < 1 for d in self.delta_n):
            raise ConfigurationError(f"delta_n values must be >= 1, got {list(self.delta_n)}")
        if any(float(s) < 0 for s in self.noise):
            raise ConfigurationError(f"noise levels must be >= 0, got {list(self.noise)}")
        make_regressor(self.regressor)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if "domains" not in raw:
            raise ConfigurationError("experiment config has no 'domains'")
        known = set(cls.__dataclass_fields__)
        unknown = set(raw) - known
        if unknown:
            raise ConfigurationError(f"unknown experiment config keys {sorted(unknown)}")
        values = dict(raw)
        values["domains"] = tuple(dict(d) for d in raw["domains"])
        values["methods"] = tuple(MethodId.parse(m) for m in raw.get("methods", [m.value for m in MethodId]))
        if raw.get("pairs") is not None:
            values["pairs"] = tuple((str(s), str(t)) for s, t in raw["pairs"])
        for key, cast in (("delta_n", int), ("noise", float), ("seeds", int), ("gamma_exponents", int)):
            if key in raw:
                values[key] = tuple(cast(v) for v in raw[key])
        return cls(**values)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        """4 digit function signature: 6401"""
        return cls.from_dict(ConfigWatcher(path).require())

    def task_pairs(self) -> List[Tuple[str, str]]:
        if self.pairs is not None:
            return list(self.pairs)
        return list(permutations([d["name"] for d in self.domains], 2))

    def domain_spec(self, name: str) -> dict:
        return next(d for d in self.domains if d["name"] == name)

    def domain_position(self, name: str) -> int:
        return [d["name"] for d in self.domains].index(name)

    def settings(self) -> TaskSettings:
        return TaskSettings(
            params=load_adapt_params(None, self.adapt),
            gamma_exponents=self.gamma_exponents,
            optimize_gamma=bool(self.optimize_gamma),
            regressor=self.regressor,
        )


@dataclass(frozen=True)
class ReportRow:
    source: str
    target: str
    method: str
    delta_n: int
    noise: float
    seed: int
    rmse: float
    status: str
    reason: str = ""
    log: Optional[PredictionLog] = None


@dataclass
class ReportTable:
    rows: List[ReportRow] = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    @property
    def all_ok(self) -> bool:
        return all(r.status == "ok" for r in self.rows)

    def frame(self) -> pd.DataFrame:
        columns = ["source", "target", "method", "delta_n", "noise", "seed", "rmse", "status", "reason"]
        return pd.DataFrame([[getattr(r, c) for c in columns] for r in self.rows], columns=columns)


@dataclass(frozen=True)
class Cell:
    source: str
    target: str
    method: MethodId
    delta_n: int
    noise: float
    seed: int


def _derived_seed(*entropy) -> int:
    return int(np.random.SeedSequence([int(e) for e in entropy]).generate_state(1)[0])


def build_domain(spec: dict, seed: int, vary_with_seed: bool) -> RegressionDomain:
    """
    Domain of one config entry: a CSV file or a synthetic panel. With
    irregular_samples the panel is sampled at random crack lengths
    (irregular_min_label, irregular_concentration shape the draw).

    4 digit function signature: 6403
    """
    if "path" in spec:
        return load_domain(spec["path"], spec["name"])
    values = {k: spec[k] for k in SYNTHETIC_KEYS if k in spec}
    if vary_with_seed:
        values["domain_seed"] = _derived_seed(spec["domain_seed"], seed)
    config = SyntheticPanelConfig(name=spec["name"], **values)
    if spec.get("irregular_samples"):
        return generate_irregular_domain(
            config, int(spec["irregular_samples"]), spec.get("irregular_min_label"),
            float(spec.get("irregular_concentration", IRREGULAR_CONCENTRATION)))
    return generate_synthetic_domain(config)


def prepare_domain(config: ExperimentConfig, name: str, noise: float, seed: int) -> RegressionDomain:
    domain = build_domain(config.domain_spec(name), seed, config.vary_domains_with_seed)
    domain = add_noise(domain, noise, _derived_seed(seed, config.domain_position(name)))
    if config.damage_index:
        domain = damage_index_domain(domain)
    return domain


def _run_cell(args) -> ReportRow:
    config, cell = args
    try:
        d_s = prepare_domain(config, cell.source, cell.noise, cell.seed)
        d_t = prepare_domain(config, cell.target, cell.noise, cell.seed)
        schedule = online_split(d_t, config.n_tl0, cell.delta_n)
        log = run_online_task(d_s, d_t, cell.method, schedule, config.settings(), cell.seed)
    except Exception as e:
        logger.error(f"[MATRIX 6405:90] :: Cell {cell} failed before the online task: {e}")
        return ReportRow(cell.source, cell.target, cell.method.value, cell.delta_n, cell.noise, cell.seed,
                         float("nan"), "failed", f"{type(e).__name__}: {e}")
    return ReportRow(cell.source, cell.target, cell.method.value, cell.delta_n, cell.noise, cell.seed,
                     log.rmse(), log.status, log.reason, log)


def matrix_cells(config: ExperimentConfig) -> List[Cell]:
    return [
        Cell(source, target, method, int(delta_n), float(noise), int(seed))
        for (source, target), method, delta_n, noise, seed in product(
            config.task_pairs(), config.methods, config.delta_n, config.noise, config.seeds)
    ]


def run_matrix(config: ExperimentConfig, workers: Optional[int] = None) -> ReportTable:
    """
    Run every (pair, method, delta_n, noise, seed) cell. Rows come back in
    configuration order whatever the worker count.

    4 digit function signature: 6405
    """
    workers = int(workers or config.workers or 1)
    cells = matrix_cells(config)
    logger.info(f"[MATRIX 6405:10] :: {len(cells)} cells | workers={workers}")

    jobs = [(config, cell) for cell in cells]
    if workers > 1 and len(jobs) > 1:
        with Pool(processes=workers) as pool:
            rows = pool.map(_run_cell, jobs)
    else:
        rows = [_run_cell(job) for job in jobs]

    table = ReportTable(list(rows))
    failed = sum(r.status != "ok" for r in table.rows)
    if failed:
        logger.error(f"[MATRIX 6405:80] :: {failed} of {len(table)} cells failed")
    else:
        logger.info(f"[MATRIX 6405:20] :: All {len(table)} cells succeeded")
    return table


def aggregate(table: ReportTable) -> pd.DataFrame:
    """
    Median and interquartile range of the RMSE over seeds, per
    (source, target, method, delta_n, noise). Failed cells are counted but
    excluded from the statistics.

    4 digit function signature: 6407
    """
    columns = AGGREGATE_KEYS + ["median_rmse", "iqr_rmse", "n_ok", "n_cells"]
    frame = table.frame()
    if frame.empty:
        return pd.DataFrame(columns=columns)

    out = []
    for key, group in frame.groupby(AGGREGATE_KEYS, sort=False):
        ok = group.loc[group["status"] == "ok", "rmse"].to_numpy(dtype=np.float64)
        if ok.size:
            q25, median, q75 = np.percentile(ok, [25, 50, 75])
        else:
            q25 = median = q75 = float("nan")
        out.append(list(key) + [float(median), float(q75 - q25), int(ok.size), int(len(group))])
    return pd.DataFrame(out, columns=columns)
