# src/bench/methods.py

from enum import Enum
from typing import Callable, Optional

import numpy as np

from src.dataset.domain import RegressionDomain
from src.errors import ConfigurationError
from src.logger_config import logger
from src.regress.regressors import Regressor


class MethodId(str, Enum):
    OSD = "OSD"        # source data only
    OTD = "OTD"        # revealed target data only
    CTD = "CTD"        # source and revealed target pooled, no adaptation
    OTCAR = "OTCAR"    # marginal adaptation
    OFJDAR = "OFJDAR"  # joint marginal + fuzzy conditional adaptation

    @classmethod
    def parse(cls, value) -> "MethodId":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ConfigurationError(f"unknown method '{value}', choose from {[m.value for m in cls]}")

    @property
    def adapts(self) -> bool:
        return self in (MethodId.OTCAR, MethodId.OFJDAR)


BASELINES = (MethodId.OSD, MethodId.OTD, MethodId.CTD)


def fit_baseline(method, d_s: Optional[RegressionDomain], d_tl: Optional[RegressionDomain],
                 regressor_factory: Callable[[], Regressor]) -> Regressor:
    """
    Train the method's regressor in the original feature space.

    OSD uses the source pool, OTD the revealed target pool, CTD their union.
    A pool is empty when passed as None.

    4 digit function signature: 6201
    """
    method = MethodId.parse(method)
    if method not in BASELINES:
        raise ConfigurationError(f"{method.value} is not a baseline method")

    if method in (MethodId.OSD, MethodId.CTD) and d_s is None:
        raise ConfigurationError(f"{method.value} needs a source pool")
    if method in (MethodId.OTD, MethodId.CTD) and d_tl is None:
        raise ConfigurationError(f"{method.value} needs a labeled target pool")

    if method == MethodId.OSD:
        x, y = d_s.features, d_s.labels
    elif method == MethodId.OTD:
        x, y = d_tl.features, d_tl.labels
    else:
        x = np.vstack((d_s.features, d_tl.features))
        y = np.concatenate((d_s.labels, d_tl.labels))

    logger.debug(f"[BENCH 6201:10] :: {method.value} fit on {y.size} samples")
    return regressor_factory().fit(x, y)
