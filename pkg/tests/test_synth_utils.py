import numpy as np
import pytest

from gridcast.utils.data_utils import load_csv
from gridcast.utils.errors import DataError
from gridcast.utils.synth_utils import (
    ACTUAL_COLUMN,
    FORECAST_COLUMN,
    SynthConfig,
    generate_synthetic_load,
    write_synthetic_csv,
)


def test_shape_and_positivity():
    frame = generate_synthetic_load(n=500, seed=1)
    assert list(frame.columns) == ["time", FORECAST_COLUMN, ACTUAL_COLUMN]
    assert len(frame) == 500
    assert np.all(frame[ACTUAL_COLUMN] > 0)


def test_seeded():
    a = generate_synthetic_load(n=200, seed=7)
    b = generate_synthetic_load(n=200, seed=7)
    c = generate_synthetic_load(n=200, seed=8)
    assert a.equals(b)
    assert not a.equals(c)


def test_daily_cycle_dominates():
    config = SynthConfig(noise_std=10.0, weekly_amplitude=0.0)
    values = generate_synthetic_load(n=24 * 20, seed=2, config=config)[ACTUAL_COLUMN].to_numpy()
    lag_24 = np.corrcoef(values[:-24], values[24:])[0, 1]
    lag_12 = np.corrcoef(values[:-12], values[12:])[0, 1]
    assert lag_24 > 0.9
    assert lag_12 < -0.9


def test_missing_cells_round_trip_through_csv(tmp_path):
    config = SynthConfig(missing_fraction=0.05)
    path = write_synthetic_csv(str(tmp_path / "nested" / "load.csv"), n=400, seed=3, config=config)
    table = load_csv(path)
    assert int(np.isnan(table.column(ACTUAL_COLUMN)).sum()) == 20
    assert not np.isnan(table.column(FORECAST_COLUMN)).any()
    assert len(table) == 400


def test_rejects_tiny_series():
    with pytest.raises(DataError):
        generate_synthetic_load(n=1)
