# gridcast/utils/metrics_utils.py
"""MAE / MAPE and the cross-model comparison report"""

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Protocol, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.metrics import mean_absolute_error, mean_absolute_percentage_error

from gridcast.utils.baseline_utils import ForecastSeries
from gridcast.utils.data_utils import LoadSeries
from gridcast.utils.errors import GridcastError, MetricError

logger = logging.getLogger(__name__)


class Forecaster(Protocol):
    name: str

    def predict(self, warmup: np.ndarray, test: np.ndarray, mode: str = "rolling") -> np.ndarray:
        ...


def _validate_pair(actual, predicted) -> Tuple[np.ndarray, np.ndarray]:
    actual = np.asarray(actual, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    if actual.size == 0:
        raise MetricError("Metrics need at least one value")
    if actual.shape != predicted.shape:
        raise MetricError(
            f"Actual and predicted lengths differ: {actual.shape} vs {predicted.shape}"
        )
    if not (np.all(np.isfinite(actual)) and np.all(np.isfinite(predicted))):
        raise MetricError("Metrics need finite values")
    return actual, predicted


def mae(actual: Sequence[float], predicted: Sequence[float]) -> float:
    """Mean absolute error in the units of the inputs (MWh)"""
    actual, predicted = _validate_pair(actual, predicted)
    return float(mean_absolute_error(actual, predicted))


def mape(actual: Sequence[float], predicted: Sequence[float]) -> float:
    """Mean absolute percentage error in percent; any zero actual value is an error"""
    actual, predicted = _validate_pair(actual, predicted)
    zeros = np.flatnonzero(actual == 0.0)
    if zeros.size:
        raise MetricError(
            f"MAPE is undefined: actual value at index {zeros[0]} is zero", index=int(zeros[0])
        )
    return float(100.0 * mean_absolute_percentage_error(actual, predicted))


@dataclass(frozen=True)
class ComparisonRow:
    model_name: str
    mae: Optional[float]
    mape: Optional[float]
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_dict(self) -> Dict[str, Any]:
        row = {"model": self.model_name, "mae": self.mae, "mape": self.mape}
        if self.error is not None:
            row["error"] = self.error
        return row


@dataclass
class ComparisonReport:
    rows: List[ComparisonRow] = field(default_factory=list)
    forecasts: Dict[str, ForecastSeries] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def row(self, model_name: str) -> ComparisonRow:
        for row in self.rows:
            if row.model_name == model_name:
                return row
        raise KeyError(model_name)

    @property
    def succeeded(self) -> List[ComparisonRow]:
        return [row for row in self.rows if row.ok]

    def metrics_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [{"model": r.model_name, "mae": r.mae, "mape": r.mape, "error": r.error or ""} for r in self.rows],
            columns=["model", "mae", "mape", "error"],
        )

    def predictions_frame(self) -> pd.DataFrame:
        """Timestamp, actual, then one column per successful model in report order"""
        if not self.forecasts:
            return pd.DataFrame(columns=["timestamp", "actual"])
        first = next(iter(self.forecasts.values()))
        frame = pd.DataFrame({"actual": first.actual})
        if first.timestamps is not None:
            frame.insert(0, "timestamp", np.asarray(first.timestamps.astype(str)))
        for row in self.succeeded:
            frame[row.model_name] = self.forecasts[row.model_name].predicted
        return frame

    def to_dict(self) -> Dict[str, Any]:
        return {"rows": [row.to_dict() for row in self.rows], "metadata": self.metadata}

    def write_bundle(self, out_dir: str) -> Dict[str, str]:
        """metrics.csv, predictions.csv and report.json under `out_dir`"""
        os.makedirs(out_dir, exist_ok=True)
        paths = {
            "metrics": os.path.join(out_dir, "metrics.csv"),
            "predictions": os.path.join(out_dir, "predictions.csv"),
            "report": os.path.join(out_dir, "report.json"),
        }
        self.metrics_frame().to_csv(paths["metrics"], index=False)
        self.predictions_frame().to_csv(paths["predictions"], index=False)
        with open(paths["report"], "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)
        logger.info(f"✅ Comparison bundle written to {out_dir}")
        return paths


def _evaluate(
    forecaster: Forecaster, warmup: LoadSeries, test: LoadSeries, mode: str
) -> Tuple[ComparisonRow, Optional[ForecastSeries]]:
    name = forecaster.name
    try:
        predicted = np.asarray(forecaster.predict(warmup.values, test.values, mode), dtype=float)
        forecast = ForecastSeries(timestamps=test.timestamps, predicted=predicted, actual=test.values)
        row = ComparisonRow(
            model_name=name,
            mae=mae(test.values, predicted),
            mape=mape(test.values, predicted),
        )
    except GridcastError as e:
        logger.warning(f"⚠️ Model '{name}' failed: {e}")
        return ComparisonRow(model_name=name, mae=None, mape=None, error=str(e)), None
    logger.info(f"✅ {name}: MAE={row.mae:.3f} MWh, MAPE={row.mape:.3f}%")
    return row, forecast


def compare(
    forecasters: Sequence[Forecaster],
    test: LoadSeries,
    warmup: LoadSeries,
    mode: str = "rolling",
    workers: int = 1,
    metadata: Optional[Dict[str, Any]] = None,
) -> ComparisonReport:
    """
    Evaluate every forecaster on the same test region

    Args:
        forecasters: Objects with `name` and `predict(warmup, test, mode)` in MWh
        test: Shared test region
        warmup: History immediately preceding the test region
        mode: "rolling" or "static"
        workers: Thread count; results are merged in input order
        metadata: Run description stored on the report

    Returns:
        Report with rows sorted by MAE (ties by name) and failed models last
    """
    names = [f.name for f in forecasters]
    if len(set(names)) != len(names):
        raise GridcastError(f"Forecaster names must be unique, got {names}")

    if workers > 1 and len(forecasters) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda f: _evaluate(f, warmup, test, mode), forecasters))
    else:
        results = [_evaluate(f, warmup, test, mode) for f in forecasters]

    report = ComparisonReport(metadata=dict(metadata or {}, mode=mode))
    for row, forecast in results:
        report.rows.append(row)
        if forecast is not None:
            report.forecasts[row.model_name] = forecast

    report.rows.sort(key=lambda r: (not r.ok, r.mae if r.ok else 0.0, r.model_name))
    return report
