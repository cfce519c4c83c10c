# gridcast/utils/config_utils.py
"""Run configuration: defaults, environment, JSON file and flag overrides (later wins)"""

import json
import os
from typing import Any, Dict, List, Literal, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from gridcast.utils.errors import ConfigError
from gridcast.utils.lstm_utils import LstmConfig
from gridcast.utils.synth_utils import ACTUAL_COLUMN, FORECAST_COLUMN, SynthConfig

MODEL_NAMES = ("ar", "ma", "arma", "arima", "lstm", "persistence", "tso")
DEFAULT_MODELS = ["ar", "ma", "arma", "arima", "lstm"]

# Environment variable -> config field
ENV_FIELDS = {
    "GRIDCAST_DATA_PATH": "data_path",
    "GRIDCAST_OUTPUT_DIR": "output_dir",
    "GRIDCAST_SEED": "seed",
}


class ModelOrders(BaseModel):
    model_config = ConfigDict(extra="forbid")

    ar_p: int = Field(25, ge=1)
    ma_window: int = Field(24, ge=1)
    arma_p: int = Field(2, ge=0)
    arma_q: int = Field(2, ge=0)
    arima_p: int = Field(2, ge=0)
    arima_d: int = Field(1, ge=0)
    arima_q: int = Field(2, ge=0)

    @model_validator(mode="after")
    def _arma_needs_terms(self) -> "ModelOrders":
        if self.arma_p + self.arma_q < 1:
            raise ValueError("ARMA needs p + q >= 1")
        return self


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    data_path: str = os.path.join("data", "energy_dataset.csv")
    target_column: str = ACTUAL_COLUMN
    forecast_column: str = FORECAST_COLUMN
    columns: Optional[List[str]] = None
    lookback: int = Field(25, ge=1)
    split_ratio: float = Field(0.8, gt=0.0, lt=1.0)
    models: List[str] = Field(default_factory=lambda: list(DEFAULT_MODELS))
    orders: ModelOrders = Field(default_factory=ModelOrders)
    lstm: LstmConfig = Field(default_factory=LstmConfig)
    synth: SynthConfig = Field(default_factory=SynthConfig)
    seed: int = 42
    mode: Literal["rolling", "static"] = "rolling"
    output_dir: str = "outputs"
    workers: int = Field(1, ge=1)
    acf_max_lag: int = Field(48, ge=1)
    checkpoint_path: Optional[str] = None

    @field_validator("models")
    @classmethod
    def _known_models(cls, models: List[str]) -> List[str]:
        models = [m.strip().lower() for m in models if m.strip()]
        unknown = [m for m in models if m not in MODEL_NAMES]
        if unknown:
            raise ValueError(f"unknown model(s) {unknown}; choose from {list(MODEL_NAMES)}")
        if not models:
            raise ValueError("at least one model must be selected")
        return list(dict.fromkeys(models))

    @model_validator(mode="after")
    def _lookback_matches_network(self) -> "RunConfig":
        if self.lstm.lookback != self.lookback:
            raise ValueError(
                f"lstm.seq_len * lstm.input_size = {self.lstm.lookback} must equal lookback = {self.lookback}"
            )
        return self

    @property
    def summary_columns(self) -> List[str]:
        return self.columns or [self.target_column]

    def lstm_settings(self) -> LstmConfig:
        """LSTM config carrying the run seed"""
        return self.lstm.model_copy(update={"seed": self.seed})

    def out_path(self, filename: str) -> str:
        return os.path.join(self.output_dir, filename)


def deep_merge(base: Dict[str, Any], updates: Mapping[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in updates.items():
        if value is None:
            continue
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = deep_merge(dict(merged[key]), value)
        else:
            merged[key] = value
    return merged


def environment_settings() -> Dict[str, Any]:
    settings = {}
    for variable, field_name in ENV_FIELDS.items():
        value = os.getenv(variable)
        if value:
            settings[field_name] = value
    return settings


def read_config_file(path: str) -> Dict[str, Any]:
    if not os.path.isfile(path):
        raise ConfigError(f"Config file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file {path} is not valid JSON: {e}") from e
    if not isinstance(payload, dict):
        raise ConfigError(f"Config file {path} must contain a JSON object")
    return payload


def build_config(
    config_path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    settings: Dict[str, Any] = environment_settings()
    if config_path:
        settings = deep_merge(settings, read_config_file(config_path))
    if overrides:
        settings = deep_merge(settings, overrides)

    try:
        # A bare lookback override resizes the input layer
        if "lookback" in settings and "input_size" not in settings.get("lstm", {}):
            lstm = dict(settings.get("lstm", {}))
            seq_len = int(lstm.get("seq_len", 1))
            if int(settings["lookback"]) % seq_len == 0:
                lstm["input_size"] = int(settings["lookback"]) // seq_len
                settings["lstm"] = lstm
        return RunConfig(**settings)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {e}") from e
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid configuration: {e}") from e
