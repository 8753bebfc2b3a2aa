# src/bench/report.py

import os
from typing import Dict

import numpy as np
import pandas as pd

from src.bench.matrix import ReportRow, ReportTable, aggregate
from src.errors import DatasetParseError
from src.logger_config import logger

RESULTS_COLUMNS = ["source", "target", "method", "delta_n", "noise", "seed", "rmse", "status"]
CURVES_COLUMNS = ["source", "target", "method", "delta_n", "noise", "seed",
                  "step", "n_tl", "index", "y_true", "y_pred", "abs_error"]
TIMINGS_COLUMNS = ["source", "target", "method", "delta_n", "noise", "seed", "step", "n_predicted",
                   "gamma", "wall_time"]
FAILURES_COLUMNS = ["source", "target", "method", "delta_n", "noise", "seed", "reason"]


def _key(row: ReportRow) -> list:
    return [row.source, row.target, row.method, row.delta_n, row.noise, row.seed]


def results_frame(table: ReportTable) -> pd.DataFrame:
    return pd.DataFrame([_key(r) + [r.rmse, r.status] for r in table.rows], columns=RESULTS_COLUMNS)


def curves_frame(table: ReportTable) -> pd.DataFrame:
    rows = []
    for row in table.rows:
        if row.log is None:
            continue
        for record in row.log.records:
            for index, y_true, y_pred in zip(record.indices, record.y_true, record.y_pred):
                rows.append(_key(row) + [record.step, record.n_tl, index, float(y_true), float(y_pred),
                                         abs(float(y_true) - float(y_pred))])
    return pd.DataFrame(rows, columns=CURVES_COLUMNS)


def timings_frame(table: ReportTable) -> pd.DataFrame:
    rows = []
    for row in table.rows:
        if row.log is None:
            continue
        for record in row.log.records:
            rows.append(_key(row) + [record.step, len(record.indices), record.gamma, record.wall_time])
    return pd.DataFrame(rows, columns=TIMINGS_COLUMNS)


def failures_frame(table: ReportTable) -> pd.DataFrame:
    return pd.DataFrame([_key(r) + [r.reason] for r in table.rows if r.status != "ok"],
                        columns=FAILURES_COLUMNS)


def _write(frame: pd.DataFrame, path: str):
    try:
        frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
    except OSError as e:
        raise OSError(f"cannot write report file {path}: {e}") from e


def emit_report(table: ReportTable, out_dir) -> Dict[str, str]:
    """
    Write results.csv, curves.csv, summary.csv, timings.csv and failures.csv.

    Wall time lives in timings.csv only, so results.csv is byte-identical
    for identical seeds.

    4 digit function signature: 6501
    """
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as e:
        raise OSError(f"cannot create report directory {out_dir}: {e}") from e

    files = {
        "results": (results_frame(table), "results.csv"),
        "curves": (curves_frame(table), "curves.csv"),
        "summary": (aggregate(table), "summary.csv"),
        "timings": (timings_frame(table), "timings.csv"),
        "failures": (failures_frame(table), "failures.csv"),
    }
    written = {}
    for name, (frame, filename) in files.items():
        path = os.path.join(out_dir, filename)
        _write(frame, path)
        written[name] = path
    logger.info(f"[REPORT 6501:10] :: {len(table)} rows written to {out_dir}")
    return written


def load_results(path) -> ReportTable:
    """
    Parse a results.csv back into a ReportTable (without per-step logs).

    4 digit function signature: 6503
    """
    try:
        frame = pd.read_csv(path, dtype={"source": str, "target": str, "method": str, "status": str})
    except OSError as e:
        raise OSError(f"cannot read results file {path}: {e}") from e
    if list(frame.columns) != RESULTS_COLUMNS:
        raise DatasetParseError(path, 1, f"expected columns {RESULTS_COLUMNS}, got {list(frame.columns)}")

    rows = [
        ReportRow(
            source=str(r.source), target=str(r.target), method=str(r.method),
            delta_n=int(r.delta_n), noise=float(r.noise), seed=int(r.seed),
            rmse=float(r.rmse) if not pd.isna(r.rmse) else float(np.nan), status=str(r.status),
        )
        for r in frame.itertuples(index=False)
    ]
    return ReportTable(rows)
