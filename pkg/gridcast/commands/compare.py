# gridcast/commands/compare.py
import logging
import os
from typing import Any, Dict, List

import click
import numpy as np

from gridcast.commands.options import emit, resolve_config, run_options
from gridcast.commands.train import fit_lstm
from gridcast.utils.baseline_utils import (
    ArimaForecaster,
    ColumnForecaster,
    MovingAverageForecaster,
    PersistenceForecaster,
    fit_ar,
    fit_arima,
    fit_arma,
    save_model,
)
from gridcast.utils.config_utils import RunConfig
from gridcast.utils.errors import CheckpointError, GridcastError, NumericalError
from gridcast.utils.lstm_utils import LstmForecaster, load_checkpoint
from gridcast.utils.metrics_utils import ComparisonReport, Forecaster, compare
from gridcast.utils.pipeline_utils import PreparedData, prepare_data

logger = logging.getLogger(__name__)


class FailedForecaster:
    """Stands in for a model that could not be fitted so it still gets an error row"""

    def __init__(self, name: str, error: GridcastError):
        self.name = name
        self.error = error

    def predict(self, warmup: np.ndarray, test: np.ndarray, mode: str = "rolling") -> np.ndarray:
        raise self.error


def _lstm_forecaster(data: PreparedData, config: RunConfig) -> LstmForecaster:
    if config.checkpoint_path:
        params, settings, scaler, _ = load_checkpoint(config.checkpoint_path)
        if settings.lookback != config.lookback:
            raise CheckpointError(
                f"Checkpoint lookback {settings.lookback} does not match config lookback {config.lookback}"
            )
        return LstmForecaster(params, settings, scaler or data.scaler)
    params, _, _ = fit_lstm(data, config)
    return LstmForecaster(params, config.lstm_settings(), data.scaler)


def build_forecaster(name: str, data: PreparedData, config: RunConfig) -> Forecaster:
    orders = config.orders
    scaled_train = data.scaled_train()
    if name == "ar":
        return ArimaForecaster(name, fit_ar(scaled_train, orders.ar_p), data.scaler)
    if name == "ma":
        return MovingAverageForecaster(orders.ma_window, name)
    if name == "arma":
        return ArimaForecaster(name, fit_arma(scaled_train, orders.arma_p, orders.arma_q), data.scaler)
    if name == "arima":
        model = fit_arima(scaled_train, orders.arima_p, orders.arima_d, orders.arima_q)
        return ArimaForecaster(name, model, data.scaler)
    if name == "persistence":
        return PersistenceForecaster(name)
    if name == "tso":
        return ColumnForecaster(name, data.test_column(config.forecast_column))
    if name == "lstm":
        return _lstm_forecaster(data, config)
    raise GridcastError(f"Unknown model '{name}'")


def build_forecasters(data: PreparedData, config: RunConfig) -> List[Forecaster]:
    forecasters = []
    for name in config.models:
        logger.info(f"🔄 Preparing model '{name}'")
        try:
            forecasters.append(build_forecaster(name, data, config))
        except GridcastError as e:
            logger.warning(f"⚠️ Model '{name}' could not be fitted: {e}")
            forecasters.append(FailedForecaster(name, e))
    return forecasters


def save_baselines(forecasters: List[Forecaster], out_dir: str) -> Dict[str, str]:
    """Write every fitted AR/ARMA/ARIMA model to <out_dir>/models/<name>.json"""
    fitted = [
        f for f in forecasters if isinstance(f, ArimaForecaster) and not isinstance(f, PersistenceForecaster)
    ]
    paths = {}
    if fitted:
        os.makedirs(os.path.join(out_dir, "models"), exist_ok=True)
    for forecaster in fitted:
        paths[forecaster.name] = os.path.join(out_dir, "models", f"{forecaster.name}.json")
        save_model(forecaster.model, paths[forecaster.name])
    return paths


def cmd_compare(config: RunConfig) -> ComparisonReport:
    """Fit or load every selected model, evaluate on the shared test split, write the bundle"""
    data = prepare_data(config)
    forecasters = build_forecasters(data, config)
    save_baselines(forecasters, config.output_dir)
    report = compare(
        forecasters,
        data.test,
        data.train,
        mode=config.mode,
        workers=config.workers,
        metadata={
            "data_path": config.data_path,
            "target_column": config.target_column,
            "split_ratio": config.split_ratio,
            "lookback": config.lookback,
            "orders": config.orders.model_dump(),
            "seed": config.seed,
            "models": config.models,
        },
    )
    report.write_bundle(config.output_dir)
    if not report.succeeded:
        raise NumericalError("No model produced a forecast; see report.json for per-model errors")
    return report


@click.command("compare")
@click.option("--workers", type=int, default=None, help="Evaluate models on this many threads")
@click.option("--checkpoint", "checkpoint_path", default=None, help="Reuse a trained LSTM checkpoint")
@run_options
def compare_command(workers, checkpoint_path, **options):
    """MAE/MAPE of every selected model on the test split"""
    extra: Dict[str, Any] = {"workers": workers, "checkpoint_path": checkpoint_path}
    config = resolve_config(**options, **extra)
    emit(cmd_compare(config).to_dict())
