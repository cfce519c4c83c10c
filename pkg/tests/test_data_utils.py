import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gridcast.utils.data_utils import (
    LoadSeries,
    ScalerParams,
    TimeSeriesTable,
    drop_missing,
    fit_scaler,
    inverse_scale,
    load_csv,
    make_windows,
    scale,
    summarize,
    train_test_split,
)
from gridcast.utils.errors import DataError, DegenerateRangeError


def test_load_csv_empty_cell_becomes_missing(write_csv):
    path = write_csv("time,load\n2020-01-01 00:00,100\n2020-01-01 01:00,\n2020-01-01 02:00,120\n")
    table = load_csv(path, ["load"])
    values = table.column("load")
    assert values[0] == 100.0
    assert math.isnan(values[1])
    assert values[2] == 120.0
    assert len(table) == 3


def test_load_csv_unparseable_cell_becomes_missing(write_csv):
    path = write_csv("time,load\n2020-01-01 00:00,abc\n2020-01-01 01:00,5.5\n")
    values = load_csv(path).column("load")
    assert math.isnan(values[0])
    assert values[1] == 5.5


def test_load_csv_infinite_cells_become_missing(write_csv):
    path = write_csv("time,load\n2020-01-01 00:00,inf\n2020-01-01 01:00,1e999\n2020-01-01 02:00,-inf\n2020-01-01 03:00,7\n")
    values = load_csv(path).column("load")
    assert np.isnan(values[:3]).all()
    assert values[3] == 7.0


def test_load_csv_uses_first_column_without_time_header(write_csv):
    path = write_csv("stamp,a,b\n2020-01-01 00:00,1,2\n2020-01-01 01:00,3,4\n")
    table = load_csv(path)
    assert table.column_names == ["a", "b"]


def test_load_csv_parses_offsets_to_utc(write_csv):
    path = write_csv("time,load\n2015-01-01 00:00:00+01:00,1\n2015-01-01 01:00:00+01:00,2\n")
    table = load_csv(path)
    assert str(table.timestamps.tz) == "UTC"
    assert table.timestamps[0].hour == 23


def test_load_csv_rejects_out_of_order(write_csv):
    path = write_csv("time,load\n2020-01-01 01:00,1\n2020-01-01 00:00,2\n")
    with pytest.raises(DataError, match="increasing"):
        load_csv(path)


def test_load_csv_rejects_duplicates(write_csv):
    path = write_csv("time,load\n2020-01-01 00:00,1\n2020-01-01 00:00,2\n")
    with pytest.raises(DataError, match="Duplicate"):
        load_csv(path)


def test_load_csv_missing_file_names_path(tmp_path):
    missing = str(tmp_path / "nope.csv")
    with pytest.raises(DataError) as excinfo:
        load_csv(missing)
    assert missing in str(excinfo.value)


def test_load_csv_missing_column(write_csv):
    path = write_csv("time,load\n2020-01-01 00:00,1\n")
    with pytest.raises(DataError, match="not found"):
        load_csv(path, ["price"])


def test_load_csv_zero_rows(write_csv):
    path = write_csv("time,load\n")
    with pytest.raises(DataError, match="no data rows"):
        load_csv(path)


def test_table_rejects_ragged_columns(hourly_index):
    with pytest.raises(DataError):
        TimeSeriesTable(timestamps=hourly_index(3), columns={"a": np.ones(2)})


def test_summarize_constant():
    stats = summarize([5, 5, 5])
    assert (stats.mean, stats.std_dev, stats.min, stats.max) == (5, 0, 5, 5)
    assert stats.missing_count == 0


def test_summarize_skips_missing():
    stats = summarize([1, None, 3])
    assert stats.valid_count == 2
    assert stats.missing_count == 1
    assert stats.mean == 2
    # Sample standard deviation
    assert stats.std_dev == pytest.approx(math.sqrt(2))


def test_summarize_json_keys():
    assert set(summarize([1.0, 2.0]).to_dict()) == {"valid", "missing", "mean", "std", "min", "max"}


def test_summarize_errors():
    with pytest.raises(DataError):
        summarize([])
    with pytest.raises(DataError):
        summarize([None, float("nan")])


@given(st.lists(st.one_of(st.none(), st.floats(-1e6, 1e6)), min_size=1, max_size=60))
def test_summarize_invariants(column):
    if all(v is None for v in column):
        return
    stats = summarize(column)
    assert stats.min <= stats.mean <= stats.max
    assert stats.std_dev >= 0
    assert stats.valid_count + stats.missing_count == len(column)


def test_drop_missing_preserves_order(hourly_index):
    table = TimeSeriesTable(hourly_index(3), {"load": np.array([100.0, np.nan, 120.0])})
    series = drop_missing(table, "load")
    assert series.values.tolist() == [100.0, 120.0]
    assert list(series.timestamps) == [table.timestamps[0], table.timestamps[2]]


def test_drop_missing_identity_when_complete(hourly_index):
    values = np.array([1.0, 2.0, 3.0])
    series = drop_missing(TimeSeriesTable(hourly_index(3), {"load": values}), "load")
    np.testing.assert_array_equal(series.values, values)


def test_drop_missing_needs_two_values(hourly_index):
    table = TimeSeriesTable(hourly_index(3), {"load": np.array([1.0, np.nan, np.nan])})
    with pytest.raises(DataError):
        drop_missing(table, "load")


def test_fit_scaler():
    params = fit_scaler([10, 20, 30])
    assert (params.min, params.max) == (10, 30)
    with pytest.raises(DegenerateRangeError):
        fit_scaler([5, 5])


def test_scale_formula():
    params = ScalerParams(min=10, max=30)
    assert scale(35, params) == pytest.approx(1.25)
    assert scale(10, params) == 0.0
    assert scale(30, params) == 1.0


def test_scale_round_trip_example():
    params = ScalerParams(min=18000.0, max=41000.0)
    x = np.array([18000.0, 28700.0, 41000.0])
    np.testing.assert_allclose(inverse_scale(scale(x, params), params), x, rtol=1e-9)


@given(
    st.floats(-1e6, 1e6),
    st.floats(-1e6, 1e6),
    st.floats(1e-3, 1e6),
)
def test_scale_round_trip(x, low, width):
    params = ScalerParams(min=low, max=low + width)
    back = float(inverse_scale(scale(x, params), params))
    tolerance = 1e-9 * max(abs(x), abs(params.min), abs(params.max), 1.0)
    assert abs(back - x) <= tolerance


def _series(hourly_index, n):
    return LoadSeries(hourly_index(n), np.arange(1.0, n + 1.0))


def test_split_sizes(hourly_index):
    train, test = train_test_split(_series(hourly_index, 100), 0.8)
    assert (len(train), len(test)) == (80, 20)
    assert train.timestamps.max() < test.timestamps.min()


def test_split_dataset_size(hourly_index):
    train, test = train_test_split(_series(hourly_index, 35028), 0.8)
    assert (len(train), len(test)) == (28022, 7006)


@pytest.mark.parametrize("ratio", [0.0, 1.0, 1.5])
def test_split_rejects_ratio(hourly_index, ratio):
    with pytest.raises(DataError):
        train_test_split(_series(hourly_index, 10), ratio)


def test_split_rejects_empty_side(hourly_index):
    with pytest.raises(DataError):
        train_test_split(_series(hourly_index, 3), 0.9)


def test_make_windows_example():
    ds = make_windows([1, 2, 3, 4], 2)
    assert ds.inputs.tolist() == [[1, 2], [2, 3]]
    assert ds.targets.tolist() == [3, 4]


def test_make_windows_dataset_length():
    assert len(make_windows(np.zeros(28022), 25)) == 27997


def test_make_windows_too_short():
    with pytest.raises(DataError):
        make_windows(np.zeros(25), 25)


@settings(max_examples=50)
@given(st.lists(st.floats(-10, 10), min_size=2, max_size=80), st.integers(1, 10))
def test_windowing_completeness(values, lookback):
    if len(values) <= lookback:
        return
    ds = make_windows(values, lookback)
    assert len(ds) == len(values) - lookback
    np.testing.assert_array_equal(ds.targets, np.asarray(values[lookback:]))
    for i in range(len(ds)):
        np.testing.assert_array_equal(ds.inputs[i], np.asarray(values[i : i + lookback]))
