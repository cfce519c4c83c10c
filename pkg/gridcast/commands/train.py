# gridcast/commands/train.py
import logging
import os
from typing import Any, Dict, Tuple

import click

from gridcast.commands.options import emit, resolve_config, run_options
from gridcast.utils.config_utils import RunConfig
from gridcast.utils.lstm_utils import (
    AdamState,
    LstmParams,
    TrainingLog,
    save_checkpoint,
    train,
)
from gridcast.utils.pipeline_utils import PreparedData, prepare_data, training_windows, validation_windows

logger = logging.getLogger(__name__)


def fit_lstm(
    data: PreparedData, config: RunConfig, progress: bool = False
) -> Tuple[LstmParams, TrainingLog, AdamState]:
    """Train on the scaled training windows; the test region is the validation curve"""
    settings = config.lstm_settings()
    return train(
        training_windows(data, config.lookback),
        settings,
        validation=validation_windows(data, config.lookback),
        progress=progress,
    )


def cmd_train(config: RunConfig, progress: bool = False) -> Dict[str, Any]:
    """Preprocess, train, then persist checkpoint.json and training_log.csv"""
    data = prepare_data(config)
    params, log, adam = fit_lstm(data, config, progress=progress)

    os.makedirs(config.output_dir, exist_ok=True)
    checkpoint_path = config.out_path("checkpoint.json")
    log_path = config.out_path("training_log.csv")
    save_checkpoint(checkpoint_path, params, config.lstm_settings(), data.scaler, adam)
    log.to_csv(log_path)
    logger.info(f"💾 Checkpoint saved to {checkpoint_path}")

    return {
        "checkpoint": checkpoint_path,
        "training_log": log_path,
        "epochs": len(log),
        "final_train_loss": log.train_loss[-1],
        "final_val_loss": log.validation_loss[-1],
        "trainable_values": sum(params.count()),
    }


@click.command("train")
@click.option("--epochs", type=int, default=None, help="Override lstm.epochs")
@run_options
def train_command(epochs, **options):
    """Train the LSTM and write checkpoint.json + training_log.csv"""
    extra = {"lstm": {"epochs": epochs}} if epochs is not None else {}
    config = resolve_config(**options, **extra)
    emit(cmd_train(config, progress=True))
