# gridcast/utils/pipeline_utils.py
"""Shared preprocessing for the train and compare commands"""

import logging
from dataclasses import dataclass

import numpy as np

from gridcast.utils.config_utils import RunConfig
from gridcast.utils.data_utils import (
    LoadSeries,
    ScalerParams,
    TimeSeriesTable,
    WindowedDataset,
    drop_missing,
    fit_scaler,
    load_csv,
    make_windows,
    scale,
    train_test_split,
)
from gridcast.utils.errors import DataError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PreparedData:
    table: TimeSeriesTable
    series: LoadSeries
    train: LoadSeries
    test: LoadSeries
    scaler: ScalerParams
    kept_rows: np.ndarray

    @property
    def n_train(self) -> int:
        return len(self.train)

    def scaled_train(self) -> np.ndarray:
        return scale(self.train.values, self.scaler)

    def scaled_series(self) -> np.ndarray:
        return scale(self.series.values, self.scaler)

    def test_column(self, name: str) -> np.ndarray:
        """Another column restricted to the rows of the test region"""
        return self.table.column(name)[self.kept_rows][self.n_train :]


def prepare_data(config: RunConfig) -> PreparedData:
    """Load, drop missing target rows, split chronologically and fit the scaler on train only"""
    table = load_csv(config.data_path)
    series = drop_missing(table, config.target_column)
    train, test = train_test_split(series, config.split_ratio)
    scaler = fit_scaler(train.values)
    logger.info(
        f"📊 {config.target_column}: {len(series)} points -> {len(train)} train / {len(test)} test"
    )
    return PreparedData(
        table=table,
        series=series,
        train=train,
        test=test,
        scaler=scaler,
        kept_rows=~np.isnan(table.column(config.target_column)),
    )


def training_windows(data: PreparedData, lookback: int) -> WindowedDataset:
    return make_windows(data.scaled_train(), lookback)


def validation_windows(data: PreparedData, lookback: int) -> WindowedDataset:
    """Windows whose targets are exactly the test region"""
    if data.n_train < lookback:
        raise DataError(f"Training region of {data.n_train} points is shorter than lookback {lookback}")
    return make_windows(data.scaled_series()[data.n_train - lookback :], lookback)
