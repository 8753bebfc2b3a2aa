# tests/test_bench.py

import json
import logging
import os
import sys

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose, assert_array_equal

import benchapp
from src.adapt.params import AdaptParams
from src.bench.matrix import ExperimentConfig, ReportTable, aggregate, build_domain, run_matrix
from src.bench.methods import MethodId, fit_baseline
from src.bench.metrics import rmse
from src.bench.online import TaskSettings, run_online_task
from src.bench.report import RESULTS_COLUMNS, CURVES_COLUMNS, emit_report, load_results
from src.config import SIM_TO_EXP_CONFIG_FILE
from src.dataset.domain import RegressionDomain
from src.dataset.schedule import online_split
from src.dataset.synthetic import SyntheticPanelConfig, generate_synthetic_domain
from src.errors import ConfigurationError, ShapeMismatchError
from src.logger_config import logger, set_log_level
from src.regress.regressors import LeastSquaresRegressor
from utils.config_watcher import ConfigWatcher

LINEAR = TaskSettings(regressor="linear", optimize_gamma=False, params=AdaptParams(k=5, max_iters=2))
FAST_ADAPT = TaskSettings(params=AdaptParams(k=5, max_iters=2), gamma_exponents=(-2, 0))


def panel(n, domain_seed=0, shift=0.0, name="panel"):
    return generate_synthetic_domain(SyntheticPanelConfig(
        n_sensors=4, label_grid={"start": 1.0, "stop": float(n), "step": 1.0},
        domain_seed=domain_seed, shift_magnitude=shift, name=name))


def tiny_config(**overrides):
    raw = {
        "domains": [
            {"name": "a", "domain_seed": 1, "shift_magnitude": 0.2, "n_sensors": 4,
             "label_grid": {"start": 1.0, "stop": 10.0, "step": 1.0}},
            {"name": "b", "domain_seed": 2, "shift_magnitude": 0.2, "n_sensors": 4,
             "label_grid": {"start": 1.0, "stop": 10.0, "step": 1.0}},
        ],
        "methods": ["OSD", "OTD", "CTD", "OTCAR", "OFJDAR"],
        "delta_n": [1, 5, 10],
        "noise": [0.0],
        "seeds": [0, 1, 2],
        "n_tl0": 5,
        "adapt": {"k": 3, "max_iters": 2},
        "optimize_gamma": False,
        "regressor": "linear",
        "workers": 1,
    }
    raw.update(overrides)
    return raw


class CountingRegressor(LeastSquaresRegressor):
    sizes = []

    def fit(self, x, y):
        CountingRegressor.sizes.append(len(y))
        return super().fit(x, y)


# ==== Metric ====

def test_rmse_examples():
    assert rmse([1, 2, 3], [1, 2, 3]) == 0.0
    assert rmse([0, 0], [3, 4]) == pytest.approx(3.535534, abs=1e-6)
    assert rmse([2.5], [-1.0]) == pytest.approx(3.5)


def test_rmse_is_permutation_invariant():
    rng = np.random.default_rng(0)
    y, y_hat = rng.normal(size=20), rng.normal(size=20)
    order = rng.permutation(20)
    assert rmse(y, y_hat) == pytest.approx(rmse(y[order], y_hat[order]), rel=1e-12)


def test_rmse_errors():
    with pytest.raises(ShapeMismatchError):
        rmse([1.0, 2.0], [1.0])
    with pytest.raises(ConfigurationError):
        rmse([], [])


# ==== Baselines ====

def test_method_parsing():
    assert MethodId.parse("ofjdar") is MethodId.OFJDAR
    assert MethodId.OTCAR.adapts and not MethodId.CTD.adapts
    with pytest.raises(ConfigurationError):
        MethodId.parse("jda")


def test_osd_ignores_target_pool():
    regressor = fit_baseline(MethodId.OSD, panel(10), None, LeastSquaresRegressor)
    assert regressor.predict(panel(10).features).shape == (10,)


def test_ctd_pools_both_domains():
    CountingRegressor.sizes.clear()
    fit_baseline(MethodId.CTD, panel(10), panel(6), CountingRegressor)
    assert CountingRegressor.sizes == [16]


def test_otd_equals_osd_on_identical_pools():
    d = panel(10)
    query = panel(10, domain_seed=3, shift=0.2).features
    osd = fit_baseline("OSD", d, None, LeastSquaresRegressor).predict(query)
    otd = fit_baseline("OTD", None, d, LeastSquaresRegressor).predict(query)
    assert_array_equal(osd, otd)


@pytest.mark.parametrize("method, d_s, d_tl", [
    ("OSD", None, None),
    ("OTD", "d", None),
    ("CTD", "d", None),
    ("OFJDAR", "d", "d"),
])
def test_baseline_errors(method, d_s, d_tl):
    d = panel(10)
    with pytest.raises(ConfigurationError):
        fit_baseline(method, d if d_s else None, d if d_tl else None, LeastSquaresRegressor)


# ==== Online task ====

def test_one_hundred_targets_give_ninety_five_predictions():
    d_s = generate_synthetic_domain(SyntheticPanelConfig(n_sensors=4, domain_seed=1, shift_magnitude=0.2))
    d_t = generate_synthetic_domain(SyntheticPanelConfig(n_sensors=4, domain_seed=2, shift_magnitude=0.2))
    log = run_online_task(d_s, d_t, MethodId.OTD, online_split(d_t, 5, 5), LINEAR)
    assert log.ok
    assert len(log.records) == 19
    assert log.predictions().size == 95
    indices = [i for record in log.records for i in record.indices]
    assert indices == list(range(5, 100))
    assert_array_equal(log.truths(), d_t.labels[5:])
    assert all(r.n_tl == 5 + 5 * r.step for r in log.records)


def test_error_resets_after_reveal_of_twin_sample():
    base = panel(12)
    twins = RegressionDomain(np.repeat(base.features, 2, axis=0), np.repeat(base.labels, 2), "twins")
    log = run_online_task(panel(12, 5, 0.3), twins, MethodId.OTD, online_split(twins, 4, 1),
                          TaskSettings(regressor="gpr"))
    assert log.ok
    span = base.labels.max() - base.labels.min()
    for record in log.records:
        if record.indices[0] % 2 == 1:
            assert abs(record.y_pred[0] - record.y_true[0]) / span < 1e-2


def test_online_task_is_deterministic():
    d_s, d_t = panel(20, 1, 0.2, "s"), panel(20, 2, 0.2, "t")
    schedule = online_split(d_t, 5, 5)
    first = run_online_task(d_s, d_t, MethodId.OFJDAR, schedule, FAST_ADAPT, seed=4)
    second = run_online_task(d_s, d_t, MethodId.OFJDAR, schedule, FAST_ADAPT, seed=4)
    assert first.ok and second.ok
    assert_array_equal(first.predictions(), second.predictions())
    assert [r.gamma for r in first.records] == [r.gamma for r in second.records]


@pytest.mark.parametrize("method", [MethodId.OFJDAR, MethodId.OTCAR, MethodId.CTD])
def test_unrevealed_labels_are_never_read(method):
    d_s, d_t = panel(20, 1, 0.2, "s"), panel(20, 2, 0.2, "t")
    poisoned_labels = np.array(d_t.labels)
    poisoned_labels[10:] += 1000.0
    poisoned = RegressionDomain(d_t.features, poisoned_labels, "t")

    clean = run_online_task(d_s, d_t, method, online_split(d_t, 5, 5), FAST_ADAPT)
    dirty = run_online_task(d_s, poisoned, method, online_split(poisoned, 5, 5), FAST_ADAPT)
    # steps 0 and 1 only have labels 0..9 revealed
    for step in (0, 1):
        assert_array_equal(clean.records[step].y_pred, dirty.records[step].y_pred)


def test_method_failure_is_recorded():
    d_s, d_t = panel(10, name="s"), panel(10, 2, 0.2, "t")
    settings = TaskSettings(params=AdaptParams(k=500), optimize_gamma=False)
    log = run_online_task(d_s, d_t, MethodId.OTCAR, online_split(d_t, 5, 5), settings)
    assert log.status == "failed"
    assert "ConfigurationError" in log.reason
    assert np.isnan(log.rmse())


def test_source_methods_exact_without_shift():
    d = panel(20, name="same")
    for method in (MethodId.OSD, MethodId.CTD):
        log = run_online_task(d, d, method, online_split(d, 5, 5), TaskSettings(regressor="gpr"))
        assert log.rmse() / (d.labels.max() - d.labels.min()) < 0.1


# ==== Matrix ====

def test_matrix_row_count_and_order():
    config = ExperimentConfig.from_dict(tiny_config())
    table = run_matrix(config)
    assert len(table) == 90
    assert table.all_ok
    first, last = table.rows[0], table.rows[-1]
    assert (first.source, first.target, first.method, first.delta_n, first.seed) == ("a", "b", "OSD", 1, 0)
    assert (last.source, last.target, last.method, last.delta_n, last.seed) == ("b", "a", "OFJDAR", 10, 2)


def test_aggregate_medians_match_raw_rows():
    table = run_matrix(ExperimentConfig.from_dict(tiny_config(methods=["OTD", "CTD"], delta_n=[5])))
    summary = aggregate(table)
    frame = table.frame()
    for _, row in summary.iterrows():
        mask = ((frame.source == row.source) & (frame.target == row.target) & (frame.method == row.method)
                & (frame.delta_n == row.delta_n) & (frame.noise == row.noise))
        assert row.median_rmse == pytest.approx(np.median(frame.loc[mask, "rmse"]))
        assert row.n_ok == row.n_cells == 3


def test_failed_cell_is_reported_not_raised():
    table = run_matrix(ExperimentConfig.from_dict(
        tiny_config(methods=["OTCAR"], delta_n=[5], seeds=[0], adapt={"k": 500})))
    assert len(table) == 2
    assert not table.all_ok
    assert all(r.status == "failed" and r.reason for r in table.rows)


def test_parallel_matrix_matches_serial():
    raw = tiny_config(methods=["OTD", "OTCAR"], delta_n=[5], seeds=[0, 1])
    serial = run_matrix(ExperimentConfig.from_dict(raw), workers=1)
    parallel = run_matrix(ExperimentConfig.from_dict(raw), workers=2)
    assert [r.rmse for r in parallel.rows] == pytest.approx([r.rmse for r in serial.rows], rel=1e-12)


def test_seed_varied_domains_change_with_seed():
    table = run_matrix(ExperimentConfig.from_dict(
        tiny_config(methods=["OTD"], delta_n=[5], seeds=[0, 1], vary_domains_with_seed=True)))
    assert table.rows[0].rmse != table.rows[1].rmse


@pytest.mark.parametrize("overrides", [
    {"pairs": [["a", "c"]]},
    {"pairs": [["a", "a"]]},
    {"methods": ["XYZ"]},
    {"delta_n": [0]},
    {"colour": "blue"},
    {"regressor": "forest"},
])
def test_invalid_experiment_config(overrides):
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_dict(tiny_config(**overrides))


def test_unreadable_experiment_config(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        ExperimentConfig.from_json(str(path))


def test_sim_to_experiment_config_loads():
    config = ExperimentConfig.from_json(SIM_TO_EXP_CONFIG_FILE)
    assert config.delta_n == (5, 10, 30, 50)
    assert config.damage_index
    assert config.task_pairs() == [("simulation", "experiment")]

    source = build_domain(config.domain_spec("simulation"), 0, config.vary_domains_with_seed)
    target = build_domain(config.domain_spec("experiment"), 0, config.vary_domains_with_seed)
    assert source.n_samples == 100
    assert target.n_samples == 800
    assert target.labels.min() == pytest.approx(16.53)
    assert np.mean(target.labels < 20.0) > 0.5


def test_sim_to_experiment_matrix_runs_reduced():
    with open(SIM_TO_EXP_CONFIG_FILE, encoding="utf-8") as f:
        raw = json.load(f)
    raw["domains"][1]["irregular_samples"] = 60
    raw.update(methods=["OTD", "OTCAR"], delta_n=[30], seeds=[0], adapt={"k": 5, "max_iters": 2},
               optimize_gamma=False, regressor="linear")
    table = run_matrix(ExperimentConfig.from_dict(raw))
    assert len(table) == 2
    assert table.all_ok
    assert all(r.log.predictions().size == 55 for r in table.rows)


# ==== Reports ====

def test_empty_table_gives_header_only_files(tmp_path):
    files = emit_report(ReportTable(), str(tmp_path))
    assert open(files["results"], encoding="utf-8").read() == ",".join(RESULTS_COLUMNS) + "\n"
    assert open(files["curves"], encoding="utf-8").read() == ",".join(CURVES_COLUMNS) + "\n"


def test_results_round_trip(tmp_path):
    table = run_matrix(ExperimentConfig.from_dict(tiny_config(methods=["OTD", "CTD"], delta_n=[5])))
    files = emit_report(table, str(tmp_path))
    loaded = load_results(files["results"])
    assert len(loaded) == len(table)
    for original, parsed in zip(table.rows, loaded.rows):
        assert (parsed.source, parsed.target, parsed.method, parsed.delta_n, parsed.seed) == \
               (original.source, original.target, original.method, original.delta_n, original.seed)
        assert parsed.rmse == pytest.approx(original.rmse, abs=1e-9)
        assert parsed.status == original.status


def test_identical_seeds_give_identical_results_bytes(tmp_path):
    raw = tiny_config(methods=["OTD", "OFJDAR"], delta_n=[5], seeds=[3])
    first = emit_report(run_matrix(ExperimentConfig.from_dict(raw)), str(tmp_path / "one"))
    second = emit_report(run_matrix(ExperimentConfig.from_dict(raw)), str(tmp_path / "two"))
    with open(first["results"], "rb") as a, open(second["results"], "rb") as b:
        assert a.read() == b.read()


def test_curves_hold_every_prediction(tmp_path):
    table = run_matrix(ExperimentConfig.from_dict(tiny_config(methods=["OTD"], delta_n=[1], seeds=[0])))
    files = emit_report(table, str(tmp_path))
    curves = pd.read_csv(files["curves"])
    assert len(curves) == 2 * 5
    assert_allclose(curves.abs_error, np.abs(curves.y_true - curves.y_pred))


# ==== CLI ====

def test_cli_matrix_generate_run_and_report(tmp_path):
    config_path = tmp_path / "experiment.json"
    config_path.write_text(json.dumps(tiny_config(methods=["OTD", "OTCAR"], delta_n=[5], seeds=[0])),
                           encoding="utf-8")
    out = tmp_path / "out"
    assert benchapp.main(["matrix", "--config", str(config_path), "--out", str(out)]) == 0
    assert (out / "results.csv").exists()

    assert benchapp.main(["report", "--results", str(out / "results.csv"), "--out", str(tmp_path / "rep")]) == 0
    assert (tmp_path / "rep" / "summary.csv").exists()

    data = tmp_path / "data"
    assert benchapp.main(["generate", "--config", str(config_path), "--out", str(data)]) == 0
    assert (data / "a.csv").exists() and (data / "b.csv").exists()

    code = benchapp.main(["run", "--source", str(data / "a.csv"), "--target", str(data / "b.csv"),
                          "--method", "otd", "--delta-n", "5", "--regressor", "linear",
                          "--out", str(tmp_path / "single")])
    assert code == 0
    assert (tmp_path / "single" / "results.csv").exists()


def test_cli_reports_failures_with_exit_code(tmp_path):
    config_path = tmp_path / "experiment.json"
    config_path.write_text(json.dumps(tiny_config(methods=["OTCAR"], delta_n=[5], seeds=[0],
                                                  adapt={"k": 500})), encoding="utf-8")
    assert benchapp.main(["matrix", "--config", str(config_path), "--out", str(tmp_path / "out")]) == 1


# ==== Config and logging ====

def test_watcher_method_overrides_and_reload(tmp_path):
    path = tmp_path / "adapt.json"
    path.write_text(json.dumps({"defaults": {"k": 10, "lam": 0.5},
                                "method_overrides": {"OTCAR": {"k": 3}}}), encoding="utf-8")
    watcher = ConfigWatcher(str(path))
    assert watcher.method_param("OTCAR", "k") == 3
    assert watcher.method_param("OFJDAR", "k") == 10
    assert watcher.method_param(None, "lam") == 0.5
    assert watcher.method_param("OFJDAR", "tol", 1e-3) == 1e-3

    path.write_text(json.dumps({"defaults": {"k": 20}}), encoding="utf-8")
    os.utime(path, (watcher.last_mtime + 5, watcher.last_mtime + 5))
    assert watcher.method_param("OTCAR", "k") == 20


def test_watcher_missing_file_is_soft_until_required(tmp_path):
    watcher = ConfigWatcher(str(tmp_path / "absent.json"))
    assert watcher.method_param("OFJDAR", "k", 7) == 7
    assert watcher.last_error
    with pytest.raises(ConfigurationError):
        watcher.require()


def test_watcher_rejects_non_object(tmp_path):
    path = tmp_path / "list.json"
    path.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        ConfigWatcher(str(path)).require()


def test_set_log_level():
    previous = logger.level
    try:
        assert set_log_level("debug") == logging.DEBUG
        assert logger.level == logging.DEBUG
        with pytest.raises(ValueError):
            set_log_level("chatty")
    finally:
        logger.setLevel(previous)
