# gridcast/utils/synth_utils.py
"""Seeded synthetic hourly load so every command runs without the external dataset"""

import logging
import os
from typing import Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from scipy.signal import lfilter

from gridcast.utils.data_utils import DEFAULT_TIMESTAMP_COLUMN
from gridcast.utils.errors import DataError

logger = logging.getLogger(__name__)

ACTUAL_COLUMN = "total load actual"
FORECAST_COLUMN = "total load forecast"


class SynthConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_hours: int = Field(5000, ge=2)
    base_load: float = Field(28000.0, gt=0)
    daily_amplitude: float = Field(4000.0, ge=0)
    weekly_amplitude: float = Field(1500.0, ge=0)
    trend_per_hour: float = 0.0
    noise_std: float = Field(400.0, ge=0)
    noise_phi: float = Field(0.7, gt=-1.0, lt=1.0)
    forecast_noise_std: float = Field(300.0, ge=0)
    missing_fraction: float = Field(0.0, ge=0.0, lt=1.0)
    start: str = "2015-01-01 00:00:00+00:00"


def generate_synthetic_load(
    n: Optional[int] = None, seed: int = 42, config: Optional[SynthConfig] = None
) -> pd.DataFrame:
    """
    Daily sine + weekly modulation + linear trend + AR(1) noise

    Args:
        n: Number of hours (overrides config.n_hours)
        seed: Generator seed
        config: Shape of the series

    Returns:
        Frame with a "time" column, the actual load and a noisy day-ahead forecast column
    """
    config = config or SynthConfig()
    n = config.n_hours if n is None else n
    if n < 2:
        raise DataError(f"Synthetic series needs at least 2 hours, got {n}")

    rng = np.random.default_rng(seed)
    t = np.arange(n, dtype=float)
    seasonal = (
        config.base_load
        + config.daily_amplitude * np.sin(2 * np.pi * t / 24.0)
        + config.weekly_amplitude * np.sin(2 * np.pi * t / 168.0)
        + config.trend_per_hour * t
    )
    # AR(1) noise: n_t = phi * n_{t-1} + e_t
    noise = lfilter([1.0], [1.0, -config.noise_phi], rng.normal(0.0, config.noise_std, n))
    actual = seasonal + noise
    if np.any(actual <= 0):
        raise DataError("Synthetic configuration produced non-positive load; raise base_load")

    forecast = actual + rng.normal(0.0, config.forecast_noise_std, n)

    actual_column = actual.copy()
    if config.missing_fraction > 0:
        n_missing = int(round(config.missing_fraction * n))
        holes = rng.choice(n, size=n_missing, replace=False)
        actual_column[holes] = np.nan

    timestamps = pd.date_range(config.start, periods=n, freq="h")
    return pd.DataFrame(
        {
            DEFAULT_TIMESTAMP_COLUMN: timestamps.strftime("%Y-%m-%d %H:%M:%S%z"),
            FORECAST_COLUMN: forecast,
            ACTUAL_COLUMN: actual_column,
        }
    )


def write_synthetic_csv(path: str, n: Optional[int] = None, seed: int = 42, config: Optional[SynthConfig] = None) -> str:
    frame = generate_synthetic_load(n=n, seed=seed, config=config)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    frame.to_csv(path, index=False)
    logger.info(f"✅ Wrote {len(frame)} synthetic hours to {path}")
    return path
