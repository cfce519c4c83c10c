# gridcast/utils/correlation_utils.py
"""Pearson correlation table and ACF/PACF correlograms"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Sequence

import numpy as np
import pandas as pd

from gridcast.utils.data_utils import TimeSeriesTable
from gridcast.utils.errors import DataError, EstimationError, GridcastError, ZeroVarianceError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorrelationRow:
    feature_name: str
    coefficient: float

    def to_dict(self) -> Dict[str, object]:
        return {"feature": self.feature_name, "coefficient": self.coefficient}


@dataclass(frozen=True)
class SkippedFeature:
    feature_name: str
    reason: str

    def to_dict(self) -> Dict[str, str]:
        return {"feature": self.feature_name, "warning": self.reason}


@dataclass
class CorrelationTable:
    """Rows sorted by coefficient (descending) plus the features that were skipped"""

    target: str
    rows: List[CorrelationRow] = field(default_factory=list)
    skipped: List[SkippedFeature] = field(default_factory=list)

    def __iter__(self) -> Iterator[CorrelationRow]:
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def __getitem__(self, index: int) -> CorrelationRow:
        return self.rows[index]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [row.to_dict() for row in self.rows], columns=["feature", "coefficient"]
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "target": self.target,
            "rows": [row.to_dict() for row in self.rows],
            "warnings": [s.to_dict() for s in self.skipped],
        }


@dataclass(frozen=True)
class CorrelogramPoint:
    lag: int
    value: float


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson coefficient with pairwise deletion of missing entries"""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DataError(f"pearson needs equal lengths, got {len(x)} and {len(y)}")
    if np.isinf(x).any() or np.isinf(y).any():
        raise DataError("pearson input contains infinite values")

    complete = ~(np.isnan(x) | np.isnan(y))
    if complete.sum() < 2:
        raise DataError("pearson needs at least 2 complete pairs")

    xc = x[complete] - x[complete].mean()
    yc = y[complete] - y[complete].mean()
    sxx = np.dot(xc, xc)
    syy = np.dot(yc, yc)
    if sxx == 0.0 or syy == 0.0:
        raise ZeroVarianceError("pearson is undefined for a zero-variance input")

    r = np.dot(xc, yc) / np.sqrt(sxx * syy)
    return float(np.clip(r, -1.0, 1.0))


def correlation_table(table: TimeSeriesTable, target: str) -> CorrelationTable:
    """Correlate every other column against `target`; failing columns are skipped with a warning"""
    target_values = table.column(target)
    result = CorrelationTable(target=target)

    for name in table.column_names:
        if name == target:
            continue
        try:
            coefficient = pearson(table.column(name), target_values)
        except GridcastError as e:
            logger.warning(f"⚠️ Skipping feature '{name}': {e}")
            result.skipped.append(SkippedFeature(feature_name=name, reason=str(e)))
            continue
        result.rows.append(CorrelationRow(feature_name=name, coefficient=coefficient))

    # Stable sort keeps column order among ties
    result.rows.sort(key=lambda row: -row.coefficient)
    if not result.rows:
        reason = f"no features could be correlated against '{target}'"
        logger.warning(f"⚠️ {reason}")
        result.skipped.append(SkippedFeature(feature_name=target, reason=reason))
    return result


def _autocovariance(series: np.ndarray, max_lag: int) -> np.ndarray:
    centered = series - series.mean()
    n = len(centered)
    return np.array(
        [np.dot(centered[: n - k], centered[k:]) / n for k in range(max_lag + 1)]
    )


def _check_correlogram_input(series: Sequence[float], max_lag: int) -> np.ndarray:
    series = np.asarray(series, dtype=float)
    if max_lag < 0:
        raise DataError(f"max_lag must be non-negative, got {max_lag}")
    if max_lag >= len(series):
        raise DataError(f"max_lag {max_lag} must be below the series length {len(series)}")
    if np.all(series == series[0]):
        raise ZeroVarianceError("Correlogram is undefined for a constant series")
    return series


def acf_values(series: Sequence[float], max_lag: int) -> np.ndarray:
    """Biased autocorrelation estimates for lags 0..max_lag"""
    series = _check_correlogram_input(series, max_lag)
    gamma = _autocovariance(series, max_lag)
    return gamma / gamma[0]


def acf(series: Sequence[float], max_lag: int) -> List[CorrelogramPoint]:
    return [CorrelogramPoint(lag=k, value=float(v)) for k, v in enumerate(acf_values(series, max_lag))]


def durbin_levinson(rho: np.ndarray) -> np.ndarray:
    """
    Partial autocorrelations from an autocorrelation sequence

    Args:
        rho: Autocorrelations for lags 0..K with rho[0] == 1

    Returns:
        Array of length K + 1; entry 0 is 1 and entry k is the lag-k partial autocorrelation
    """
    max_lag = len(rho) - 1
    pacf_out = np.ones(max_lag + 1)
    if max_lag == 0:
        return pacf_out

    phi = np.zeros(max_lag)
    variance = 1.0
    for k in range(1, max_lag + 1):
        numerator = rho[k] - np.dot(phi[: k - 1], rho[k - 1 : 0 : -1])
        reflection = numerator / variance
        if not np.isfinite(reflection) or abs(reflection) >= 1.0:
            raise EstimationError(
                f"Durbin-Levinson recursion broke down at lag {k} (reflection {reflection})"
            )
        previous = phi[: k - 1].copy()
        phi[: k - 1] = previous - reflection * previous[::-1]
        phi[k - 1] = reflection
        variance *= 1.0 - reflection * reflection
        pacf_out[k] = reflection
    return pacf_out


def pacf(series: Sequence[float], max_lag: int) -> List[CorrelogramPoint]:
    values = durbin_levinson(acf_values(series, max_lag))
    return [CorrelogramPoint(lag=k, value=float(v)) for k, v in enumerate(values)]


def correlogram_frame(series: Sequence[float], max_lag: int) -> pd.DataFrame:
    """ACF and PACF side by side, ready for plotting"""
    rho = acf_values(series, max_lag)
    return pd.DataFrame(
        {"lag": np.arange(max_lag + 1), "acf": rho, "pacf": durbin_levinson(rho)}
    )
