# src/dataset/schedule.py
from dataclasses import dataclass
from typing import Tuple

from src.dataset.domain import RegressionDomain
from src.errors import ConfigurationError
from src.logger_config import logger


@dataclass(frozen=True)
class OnlineSchedule:
    """
    Labeled/unlabeled index ranges of each online step.

    Indices are 0-based positions in the label-sorted target domain. Batch b
    predicts `unlabeled` using everything in `labeled`; its unlabeled range
    is revealed and joins the labeled range of batch b + 1.
    """
    n_tl0: int
    delta_n: int
    batches: Tuple[Tuple[range, range], ...]

    @property
    def n_predictions(self) -> int:
        return sum(len(unlabeled) for _, unlabeled in self.batches)

    def summary(self) -> dict:
        return {
            "n_tl0": self.n_tl0,
            "delta_n": self.delta_n,
            "n_batches": len(self.batches),
            "n_predictions": self.n_predictions,
        }


def online_split(domain: RegressionDomain, n_tl0: int, delta_n: int) -> OnlineSchedule:
    """
    Walk the target domain in label order: start with n_tl0 labeled samples,
    predict delta_n at a time, reveal, repeat. The last batch may be short.

    4 digit function signature: 2401
    """
    n_t = domain.n_samples
    if not 1 <= n_tl0 < n_t:
        raise ConfigurationError(f"n_tl0 must satisfy 1 <= n_tl0 < n_t ({n_t}), got {n_tl0}")
    if delta_n < 1:
        raise ConfigurationError(f"delta_n must be >= 1, got {delta_n}")

    batches = []
    revealed = n_tl0
    while revealed < n_t:
        stop = min(revealed + delta_n, n_t)
        batches.append((range(0, revealed), range(revealed, stop)))
        revealed = stop

    schedule = OnlineSchedule(int(n_tl0), int(delta_n), tuple(batches))
    logger.debug(f"[SCHEDULE 2401:10] :: '{domain.name}' schedule: {schedule.summary()}")
    return schedule
