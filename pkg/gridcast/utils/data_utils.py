# gridcast/utils/data_utils.py
"""Ingestion, summary statistics, scaling, splitting and windowing of hourly load data"""

import logging
import os
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from gridcast.utils.errors import DataError, DegenerateRangeError

logger = logging.getLogger(__name__)

DEFAULT_TIMESTAMP_COLUMN = "time"


@dataclass(frozen=True, eq=False)
class TimeSeriesTable:
    """Hour-resolution timestamps plus named numeric columns (NaN marks a missing cell)"""

    timestamps: pd.DatetimeIndex
    columns: Dict[str, np.ndarray]

    def __post_init__(self):
        if not (self.timestamps.is_monotonic_increasing and self.timestamps.is_unique):
            raise DataError("Timestamps must be strictly increasing (no duplicates)")
        for name, values in self.columns.items():
            if len(values) != len(self.timestamps):
                raise DataError(
                    f"Column '{name}' has {len(values)} entries, expected {len(self.timestamps)}"
                )

    def __len__(self) -> int:
        return len(self.timestamps)

    @property
    def column_names(self) -> List[str]:
        return list(self.columns)

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise DataError(f"Column '{name}' not found; available: {self.column_names}")
        return self.columns[name]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.columns, index=self.timestamps)


@dataclass(frozen=True, eq=False)
class LoadSeries:
    """Gap-free hourly demand values in MWh"""

    timestamps: pd.DatetimeIndex
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != len(self.timestamps):
            raise DataError("LoadSeries timestamps and values differ in length")
        if len(self.values) < 2:
            raise DataError(f"LoadSeries needs at least 2 values, got {len(self.values)}")
        if not np.all(np.isfinite(self.values)):
            raise DataError("LoadSeries values must be finite")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class SummaryStats:
    valid_count: int
    missing_count: int
    mean: float
    std_dev: float
    min: float
    max: float

    def to_dict(self) -> Dict[str, float]:
        return {
            "valid": self.valid_count,
            "missing": self.missing_count,
            "mean": self.mean,
            "std": self.std_dev,
            "min": self.min,
            "max": self.max,
        }


@dataclass(frozen=True)
class ScalerParams:
    min: float
    max: float

    def __post_init__(self):
        if not self.max > self.min:
            raise DegenerateRangeError(
                f"Scaler range is degenerate: min={self.min}, max={self.max}"
            )

    def to_dict(self) -> Dict[str, float]:
        return {"min": self.min, "max": self.max}


@dataclass(frozen=True, eq=False)
class WindowedDataset:
    """Supervised pairs: `lookback` scaled values in, the next scaled value out"""

    inputs: np.ndarray
    targets: np.ndarray
    lookback: int

    def __len__(self) -> int:
        return len(self.targets)


def load_csv(
    path: str,
    column_names: Optional[Sequence[str]] = None,
    timestamp_column: Optional[str] = None,
) -> TimeSeriesTable:
    """
    Read an hourly CSV into a TimeSeriesTable

    Args:
        path: CSV file (comma separated, header row, dot decimals)
        column_names: Columns to keep; all non-timestamp columns when None
        timestamp_column: Header of the timestamp column; "time" if present, else the first column

    Returns:
        Table with unparseable or empty cells turned into NaN
    """
    if not os.path.isfile(path):
        raise DataError(f"Data file not found: {path}")

    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataError(f"Could not parse CSV {path}: {e}") from e

    if frame.shape[1] == 0:
        raise DataError(f"CSV {path} has no header row")

    if timestamp_column is None:
        timestamp_column = (
            DEFAULT_TIMESTAMP_COLUMN if DEFAULT_TIMESTAMP_COLUMN in frame.columns else frame.columns[0]
        )
    if timestamp_column not in frame.columns:
        raise DataError(f"Timestamp column '{timestamp_column}' not found in {path}")

    if column_names is None:
        column_names = [c for c in frame.columns if c != timestamp_column]
    missing_columns = [c for c in column_names if c not in frame.columns]
    if missing_columns:
        raise DataError(f"Column(s) {missing_columns} not found in {path}")

    if len(frame) == 0:
        raise DataError(f"CSV {path} has no data rows")

    try:
        timestamps = pd.DatetimeIndex(pd.to_datetime(frame[timestamp_column], utc=True))
    except (ValueError, TypeError) as e:
        raise DataError(f"Unparseable timestamp in {path}: {e}") from e

    if not timestamps.is_unique:
        duplicated = timestamps[timestamps.duplicated()][0]
        raise DataError(f"Duplicate timestamp {duplicated} in {path}")
    if not timestamps.is_monotonic_increasing:
        raise DataError(f"Timestamps in {path} are not in increasing order")

    columns = {}
    for name in column_names:
        values = np.array(pd.to_numeric(frame[name].str.strip(), errors="coerce"), dtype=float)
        # inf and overflowing literals count as unparseable
        values[~np.isfinite(values)] = np.nan
        columns[name] = values
    logger.info(f"✅ Loaded {len(frame)} rows x {len(columns)} columns from {path}")
    return TimeSeriesTable(timestamps=timestamps, columns=columns)


def summarize(column: Iterable[Optional[float]]) -> SummaryStats:
    """Summary statistics over the non-missing entries (sample standard deviation)"""
    series = pd.Series(list(column), dtype=float)
    if len(series) == 0:
        raise DataError("Cannot summarize an empty column")

    valid = series.dropna()
    if len(valid) == 0:
        raise DataError("Cannot summarize a column whose values are all missing")

    # A single valid value has no sample spread
    std_dev = float(valid.std(ddof=1)) if len(valid) > 1 else 0.0
    lowest, highest = float(valid.min()), float(valid.max())
    # Rounding in the sum can push the mean of near-constant data just past an extreme
    mean = min(max(float(valid.mean()), lowest), highest)
    return SummaryStats(
        valid_count=int(len(valid)),
        missing_count=int(series.isna().sum()),
        mean=mean,
        std_dev=std_dev,
        min=lowest,
        max=highest,
    )


def drop_missing(table: TimeSeriesTable, column: str) -> LoadSeries:
    """Keep the rows where `column` is present, preserving order"""
    values = table.column(column)
    keep = ~np.isnan(values)
    if keep.sum() < 2:
        raise DataError(f"Column '{column}' has fewer than 2 non-missing values")

    dropped = int((~keep).sum())
    if dropped:
        logger.info(f"🔄 Dropped {dropped} missing values from '{column}'")

    series = LoadSeries(timestamps=table.timestamps[keep], values=values[keep].copy())
    if np.any(series.values <= 0):
        logger.warning(f"⚠️ Column '{column}' contains non-positive load values")
    return series


def fit_scaler(train_values: Sequence[float]) -> ScalerParams:
    """Min-max scaler fitted on the training portion only"""
    values = np.asarray(train_values, dtype=float)
    if len(values) < 2:
        raise DataError("fit_scaler needs at least 2 values")
    return ScalerParams(min=float(values.min()), max=float(values.max()))


def scale(values, params: ScalerParams) -> np.ndarray:
    # Test data may fall outside [0, 1]
    return (np.asarray(values, dtype=float) - params.min) / (params.max - params.min)


def inverse_scale(scaled, params: ScalerParams) -> np.ndarray:
    return np.asarray(scaled, dtype=float) * (params.max - params.min) + params.min


def train_test_split(series: LoadSeries, ratio: float) -> Tuple[LoadSeries, LoadSeries]:
    """Chronological split: the first floor(ratio * n) points train, the rest test"""
    if not 0.0 < ratio < 1.0:
        raise DataError(f"Split ratio must lie strictly between 0 and 1, got {ratio}")

    n_train = int(np.floor(ratio * len(series)))
    if n_train < 2 or len(series) - n_train < 2:
        raise DataError(
            f"Split ratio {ratio} on {len(series)} points leaves a side with fewer than 2 points"
        )

    train = LoadSeries(series.timestamps[:n_train], series.values[:n_train])
    test = LoadSeries(series.timestamps[n_train:], series.values[n_train:])
    return train, test


def make_windows(values: Sequence[float], lookback: int) -> WindowedDataset:
    """Sliding windows: inputs[i] = values[i:i+lookback], targets[i] = values[i+lookback]"""
    values = np.asarray(values, dtype=float)
    if lookback < 1:
        raise DataError(f"Lookback must be at least 1, got {lookback}")
    if len(values) <= lookback:
        raise DataError(
            f"Series of length {len(values)} is too short for lookback {lookback}"
        )

    inputs = np.lib.stride_tricks.sliding_window_view(values, lookback)[:-1].copy()
    targets = values[lookback:].copy()
    return WindowedDataset(inputs=inputs, targets=targets, lookback=lookback)
