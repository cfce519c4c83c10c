import logging
import os

import numpy as np
import pandas as pd
import pytest

from gridcast.utils.synth_utils import SynthConfig, write_synthetic_csv

DATASET_CANDIDATES = [
    os.getenv("GRIDCAST_DATASET", ""),
    os.path.join(os.path.dirname(__file__), "..", "data", "energy_dataset.csv"),
]


@pytest.fixture(autouse=True)
def reset_gridcast_logging():
    yield
    logger = logging.getLogger("gridcast")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)


@pytest.fixture
def write_csv(tmp_path):
    """Write rows of text to a CSV under tmp_path and return its path"""

    def _write(text: str, name: str = "load.csv") -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture
def hourly_index():
    def _index(n: int) -> pd.DatetimeIndex:
        return pd.date_range("2020-01-01", periods=n, freq="h", tz="UTC")

    return _index


@pytest.fixture
def synthetic_csv(tmp_path):
    """600 hours of synthetic load with a forecast column"""
    return write_synthetic_csv(str(tmp_path / "synthetic.csv"), n=600, seed=3, config=SynthConfig())


@pytest.fixture
def ar1_series():
    def _simulate(phi: float, n: int, seed: int = 0, burn_in: int = 500) -> np.ndarray:
        rng = np.random.default_rng(seed)
        e = rng.normal(size=n + burn_in)
        x = np.zeros(n + burn_in)
        for t in range(1, n + burn_in):
            x[t] = phi * x[t - 1] + e[t]
        return x[burn_in:]

    return _simulate


@pytest.fixture(scope="session")
def dataset_path():
    for candidate in DATASET_CANDIDATES:
        if candidate and os.path.isfile(candidate):
            return candidate
    pytest.skip("energy dataset not available (set GRIDCAST_DATASET)")
