import json

import pytest

from gridcast import create_config
from gridcast.utils.config_utils import DEFAULT_MODELS, RunConfig
from gridcast.utils.errors import ConfigError


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for variable in ("GRIDCAST_DATA_PATH", "GRIDCAST_OUTPUT_DIR", "GRIDCAST_SEED"):
        monkeypatch.delenv(variable, raising=False)


def write_config(tmp_path, payload):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def test_defaults():
    config = create_config()
    assert config.lookback == 25
    assert config.split_ratio == 0.8
    assert config.models == DEFAULT_MODELS
    assert (config.orders.ar_p, config.orders.ma_window) == (25, 24)
    assert (config.orders.arima_p, config.orders.arima_d, config.orders.arima_q) == (2, 1, 2)
    assert (config.lstm.hidden_size, config.lstm.input_size, config.lstm.seq_len) == (100, 25, 1)
    assert config.mode == "rolling"


def test_precedence_env_file_flags(tmp_path, monkeypatch):
    monkeypatch.setenv("GRIDCAST_SEED", "7")
    monkeypatch.setenv("GRIDCAST_OUTPUT_DIR", "env_out")
    assert create_config().seed == 7

    path = write_config(tmp_path, {"seed": 11, "lstm": {"epochs": 3}})
    from_file = create_config(path)
    assert from_file.seed == 11
    assert from_file.output_dir == "env_out"
    assert from_file.lstm.epochs == 3
    assert from_file.lstm.hidden_size == 100

    flagged = create_config(path, {"seed": 99, "output_dir": None, "lstm": {"hidden_size": 8}})
    assert flagged.seed == 99
    assert flagged.output_dir == "env_out"
    assert (flagged.lstm.epochs, flagged.lstm.hidden_size) == (3, 8)


def test_lstm_settings_carry_run_seed():
    assert create_config(overrides={"seed": 5}).lstm_settings().seed == 5


def test_lookback_override_resizes_input():
    config = create_config(overrides={"lookback": 12})
    assert config.lstm.input_size == 12


def test_lookback_must_match_network():
    with pytest.raises(ConfigError, match="lookback"):
        create_config(overrides={"lookback": 25, "lstm": {"input_size": 5, "seq_len": 2}})


def test_sequence_layout_accepted():
    config = create_config(overrides={"lstm": {"input_size": 1, "seq_len": 25}})
    assert config.lstm.lookback == 25


@pytest.mark.parametrize(
    "overrides",
    [
        {"models": ["ar", "prophet"]},
        {"split_ratio": 1.0},
        {"lookback": 0},
        {"mode": "sideways"},
        {"unknown_field": 1},
        {"orders": {"arma_p": 0, "arma_q": 0}},
    ],
)
def test_invalid_settings(overrides):
    with pytest.raises(ConfigError):
        create_config(overrides=overrides)


def test_models_normalised():
    config = create_config(overrides={"models": [" AR", "lstm", "ar"]})
    assert config.models == ["ar", "lstm"]


def test_missing_or_bad_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        create_config(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        create_config(str(bad))


def test_out_path():
    config = RunConfig(output_dir="results")
    assert config.out_path("metrics.csv").endswith("metrics.csv")
    assert config.summary_columns == [config.target_column]
