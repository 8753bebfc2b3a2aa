# src/dataset/loaders.py
import csv
import os

import numpy as np
import pandas as pd

from src.config import CSV_FEATURE_PREFIX, CSV_LABEL_COLUMN
from src.dataset.domain import RegressionDomain
from src.errors import DatasetParseError
from src.logger_config import logger


def save_domain(domain: RegressionDomain, path):
    """
    Write a domain as CSV: feature_1..feature_m,label.

    4 digit function signature: 2501
    """
    header = [f"{CSV_FEATURE_PREFIX}{k + 1}" for k in range(domain.n_features)]
    frame = pd.DataFrame(domain.features, columns=header)
    frame[CSV_LABEL_COLUMN] = domain.labels
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n", float_format="%.17g")
    logger.info(f"[DATASET 2501:10] :: Domain '{domain.name}' saved to {path} ({domain.n_samples} rows)")


def load_domain(path, name=None) -> RegressionDomain:
    """
    Read a domain CSV written by save_domain (or by hand in the same format).

    Raises DatasetParseError with the offending line number.

    4 digit function signature: 2502
    """
    name = name or os.path.splitext(os.path.basename(path))[0]
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetParseError(path, 1, "missing header")

        header = [h.strip() for h in header]
        if len(header) < 2 or header[-1] != CSV_LABEL_COLUMN:
            raise DatasetParseError(path, 1, f"header must end with '{CSV_LABEL_COLUMN}', got {header}")
        expected_features = [f"{CSV_FEATURE_PREFIX}{k + 1}" for k in range(len(header) - 1)]
        if header[:-1] != expected_features:
            raise DatasetParseError(path, 1, f"feature columns must be {CSV_FEATURE_PREFIX}1..m")

        width = len(header)
        rows = []
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != width:
                raise DatasetParseError(path, line, f"expected {width} fields, found {len(row)}")
            try:
                rows.append([float(cell) for cell in row])
            except ValueError as e:
                raise DatasetParseError(path, line, f"non-numeric cell: {e}")

    if not rows:
        raise DatasetParseError(path, 2, "empty domain (header only)")

    data = np.asarray(rows, dtype=np.float64)
    logger.info(f"[DATASET 2502:10] :: Loaded '{name}' from {path} ({data.shape[0]} rows, {width - 1} features)")
    return RegressionDomain(data[:, :-1], data[:, -1], name)
