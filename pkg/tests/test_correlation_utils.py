import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import solve, toeplitz

from gridcast.utils.correlation_utils import (
    acf,
    acf_values,
    correlation_table,
    correlogram_frame,
    durbin_levinson,
    pacf,
    pearson,
)
from gridcast.utils.data_utils import TimeSeriesTable
from gridcast.utils.errors import DataError, EstimationError, ZeroVarianceError


def test_pearson_self_and_negation():
    x = np.array([1.0, 4.0, 2.0, 8.0, 5.0])
    assert pearson(x, x) == pytest.approx(1.0)
    assert pearson(x, -x) == pytest.approx(-1.0)


def test_pearson_pairwise_deletion():
    x = [1.0, 2.0, np.nan, 4.0, 7.0]
    y = [2.0, 4.0, 6.0, np.nan, 1.0]
    # Complete pairs: (1, 2), (2, 4), (7, 1)
    assert pearson(x, y) == pytest.approx(pearson([1, 2, 7], [2, 4, 1]))


def test_pearson_errors():
    with pytest.raises(ZeroVarianceError):
        pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(DataError):
        pearson([1, np.nan, 3], [np.nan, 2, np.nan])
    with pytest.raises(DataError):
        pearson([1, 2], [1, 2, 3])


@settings(max_examples=50)
@given(st.integers(0, 10_000))
def test_pearson_symmetric(seed):
    rng = np.random.default_rng(seed)
    x, y = rng.normal(size=(2, 40))
    assert pearson(x, y) == pearson(y, x)


@settings(max_examples=50)
@given(st.integers(0, 10_000), st.floats(0.1, 10.0), st.floats(-100.0, 100.0))
def test_pearson_affine_invariant(seed, a, b):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=50)
    y = 0.5 * x + rng.normal(size=50)
    assert abs(pearson(a * x + b, y) - pearson(x, y)) < 1e-9
    assert abs(pearson(x, a * y + b) - pearson(x, y)) < 1e-9


def test_correlation_table_identical_column(hourly_index):
    values = np.array([1.0, 3.0, 2.0, 5.0])
    table = TimeSeriesTable(hourly_index(4), {"target": values, "copy": values.copy()})
    result = correlation_table(table, "target")
    assert len(result) == 1
    assert result[0].feature_name == "copy"
    assert result[0].coefficient == pytest.approx(1.0)


def test_correlation_table_sorted_and_skips_constant(hourly_index):
    rng = np.random.default_rng(1)
    target = rng.normal(size=200)
    table = TimeSeriesTable(
        hourly_index(200),
        {
            "target": target,
            "weak": 0.1 * target + rng.normal(size=200),
            "flat": np.full(200, 3.0),
            "strong": target + 0.1 * rng.normal(size=200),
            "anti": -target,
        },
    )
    result = correlation_table(table, "target")
    assert [row.feature_name for row in result] == ["strong", "weak", "anti"]
    assert [s.feature_name for s in result.skipped] == ["flat"]
    payload = result.to_dict()
    assert payload["warnings"][0]["feature"] == "flat"
    assert all(abs(row["coefficient"]) <= 1 + 1e-12 for row in payload["rows"])


def test_correlation_table_single_column(hourly_index):
    table = TimeSeriesTable(hourly_index(3), {"target": np.array([1.0, 2.0, 3.0])})
    result = correlation_table(table, "target")
    assert result.rows == []
    assert result.to_dict()["warnings"][0]["feature"] == "target"


def test_pearson_rejects_infinite_values():
    with pytest.raises(DataError, match="infinite"):
        pearson([1.0, np.inf, 2.0, 4.0], [1.0, 2.0, 3.0, 4.0])


def test_correlation_table_skips_infinite_feature(hourly_index):
    target = np.array([1.0, 2.0, 4.0, 3.0])
    table = TimeSeriesTable(
        hourly_index(4), {"target": target, "x": np.array([1.0, np.inf, 2.0, 4.0]), "y": 2 * target}
    )
    payload = correlation_table(table, "target").to_dict()
    assert payload["rows"] == [{"feature": "y", "coefficient": pytest.approx(1.0)}]
    assert payload["warnings"][0]["feature"] == "x"


def test_acf_lag_zero():
    points = acf([3.0, 1.0, 4.0, 1.0, 5.0], 3)
    assert points[0].lag == 0
    assert points[0].value == 1.0


def test_acf_ar1(ar1_series):
    x = ar1_series(0.8, 10_000, seed=11)
    values = acf_values(x, 5)
    for k in range(6):
        assert abs(values[k] - 0.8 ** k) < 0.05


def test_acf_white_noise():
    x = np.random.default_rng(5).normal(size=10_000)
    assert np.all(np.abs(acf_values(x, 20)[1:]) < 0.05)


@settings(max_examples=30)
@given(st.lists(st.floats(-100, 100), min_size=3, max_size=50))
def test_acf_bounded(values):
    x = np.asarray(values)
    if np.ptp(x) < 1e-6:
        return
    rho = acf_values(x, len(x) - 1)
    assert rho[0] == pytest.approx(1.0)
    assert np.all(np.abs(rho) <= 1 + 1e-9)


def test_acf_errors():
    with pytest.raises(ZeroVarianceError):
        acf([2.0, 2.0, 2.0], 1)
    with pytest.raises(DataError):
        acf([1.0, 2.0, 3.0], 3)


def test_pacf_lag_one_equals_acf():
    x = np.random.default_rng(2).normal(size=300).cumsum()
    assert pacf(x, 4)[1].value == pytest.approx(acf(x, 4)[1].value)


def test_pacf_ar1_cutoff(ar1_series):
    values = [p.value for p in pacf(ar1_series(0.8, 10_000, seed=12), 10)]
    assert abs(values[1] - 0.8) < 0.05
    assert all(abs(v) < 0.05 for v in values[2:])


def test_pacf_ar2_cutoff():
    rng = np.random.default_rng(13)
    e = rng.normal(size=10_500)
    x = np.zeros_like(e)
    for t in range(2, len(e)):
        x[t] = 0.5 * x[t - 1] + 0.3 * x[t - 2] + e[t]
    values = [p.value for p in pacf(x[500:], 10)]
    assert all(abs(v) < 0.05 for v in values[3:])


@pytest.mark.parametrize("seed", range(5))
def test_durbin_levinson_matches_yule_walker(seed):
    rng = np.random.default_rng(seed)
    x = np.cumsum(rng.normal(size=400)) * 0.1 + rng.normal(size=400)
    rho = acf_values(x, 10)
    partial = durbin_levinson(rho)
    for k in range(1, 11):
        phi = solve(toeplitz(rho[:k]), rho[1 : k + 1])
        assert abs(partial[k] - phi[-1]) < 1e-6


def test_durbin_levinson_breakdown():
    with pytest.raises(EstimationError):
        durbin_levinson(np.array([1.0, 1.0, 1.0]))


def test_correlogram_frame_columns():
    noisy = np.sin(np.arange(100) / 3.0) + np.random.default_rng(4).normal(scale=0.3, size=100)
    frame = correlogram_frame(noisy, 12)
    assert list(frame.columns) == ["lag", "acf", "pacf"]
    assert len(frame) == 13
    assert frame["pacf"].iloc[1] == pytest.approx(frame["acf"].iloc[1])
