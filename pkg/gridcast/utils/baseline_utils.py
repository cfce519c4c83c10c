# gridcast/utils/baseline_utils.py
"""
Classical comparators: AR, moving average, ARMA and ARIMA

Estimation works on scaled training values. AR uses ridge-stabilised least squares;
ARMA minimises the conditional sum of squares (zero pre-sample innovations) starting
from a Hannan-Rissanen estimate and refined with a Nelder-Mead simplex search.
"""

import json
import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import minimize
from scipy.signal import lfilter
from scipy.special import comb

from gridcast.utils.data_utils import ScalerParams, inverse_scale, scale
from gridcast.utils.errors import CheckpointError, DataError, EstimationError

logger = logging.getLogger(__name__)

MODEL_SCHEMA_VERSION = 1
RIDGE_EPSILON = 1e-8
CSS_RELATIVE_TOLERANCE = 1e-8
CSS_MAX_ITERATIONS = 500
FORECAST_MODES = ("rolling", "static")


@dataclass(frozen=True, eq=False)
class ArimaModel:
    """AR, ARMA and ARIMA coefficients in one container (intercept in scaled units)"""

    ar_coeffs: np.ndarray
    ma_coeffs: np.ndarray
    intercept: float = 0.0
    diff_order: int = 0
    noise_variance: float = 0.0
    flags: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "ar_coeffs", np.asarray(self.ar_coeffs, dtype=float).reshape(-1))
        object.__setattr__(self, "ma_coeffs", np.asarray(self.ma_coeffs, dtype=float).reshape(-1))
        if self.diff_order < 0:
            raise EstimationError(f"Differencing order must be >= 0, got {self.diff_order}")
        if self.noise_variance < 0:
            raise EstimationError(f"Noise variance must be >= 0, got {self.noise_variance}")

    @property
    def p(self) -> int:
        return len(self.ar_coeffs)

    @property
    def q(self) -> int:
        return len(self.ma_coeffs)

    @property
    def d(self) -> int:
        return self.diff_order

    @property
    def orders(self) -> Tuple[int, int, int]:
        return self.p, self.d, self.q

    @property
    def is_stationary(self) -> bool:
        return ar_is_stationary(self.ar_coeffs)

    @property
    def kind(self) -> str:
        if self.d:
            return "arima"
        if self.q and self.p:
            return "arma"
        return "ma" if self.q else "ar"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": MODEL_SCHEMA_VERSION,
            "kind": self.kind,
            "p": self.p,
            "d": self.d,
            "q": self.q,
            "phi": self.ar_coeffs.tolist(),
            "theta": self.ma_coeffs.tolist(),
            "intercept": self.intercept,
            "sigma2": self.noise_variance,
            "flags": self.flags,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "ArimaModel":
        if payload.get("schema_version") != MODEL_SCHEMA_VERSION:
            raise CheckpointError(
                f"Unsupported model schema_version {payload.get('schema_version')}"
            )
        try:
            model = cls(
                ar_coeffs=payload["phi"],
                ma_coeffs=payload["theta"],
                intercept=float(payload["intercept"]),
                diff_order=int(payload["d"]),
                noise_variance=float(payload["sigma2"]),
                flags=dict(payload.get("flags", {})),
            )
        except KeyError as e:
            raise CheckpointError(f"Model file is missing field {e}") from e
        if (model.p, model.q) != (payload["p"], payload["q"]):
            raise CheckpointError("Declared orders do not match coefficient lengths")
        return model


@dataclass(frozen=True, eq=False)
class ForecastSeries:
    """Predictions (MWh) with optional aligned actual values"""

    timestamps: Optional[pd.DatetimeIndex]
    predicted: np.ndarray
    actual: Optional[np.ndarray] = None

    def __post_init__(self):
        if not np.all(np.isfinite(self.predicted)):
            raise EstimationError("Forecast contains non-finite predictions")
        if self.actual is not None and len(self.actual) != len(self.predicted):
            raise DataError("Forecast and actual series differ in length")
        if self.timestamps is not None and len(self.timestamps) != len(self.predicted):
            raise DataError("Forecast timestamps and predictions differ in length")

    def __len__(self) -> int:
        return len(self.predicted)


def ar_is_stationary(ar_coeffs: Sequence[float]) -> bool:
    """True when every root of 1 - phi_1 z - ... - phi_p z^p lies outside the unit circle"""
    phi = np.asarray(ar_coeffs, dtype=float)
    if len(phi) == 0:
        return True
    # np.roots wants the highest power first
    roots = np.roots(np.r_[-phi[::-1], 1.0])
    return bool(np.all(np.abs(roots) > 1.0))


def _lag_matrix(x: np.ndarray, p: int) -> np.ndarray:
    """Row k holds x[k+p-1], ..., x[k] (lag 1 first) for the target x[k+p]"""
    return np.lib.stride_tricks.sliding_window_view(x, p)[:-1, ::-1]


def _ridge_solve(design: np.ndarray, target: np.ndarray) -> np.ndarray:
    gram = design.T @ design + RIDGE_EPSILON * np.eye(design.shape[1])
    try:
        return np.linalg.solve(gram, design.T @ target)
    except np.linalg.LinAlgError as e:
        raise EstimationError(f"Normal equations are singular: {e}") from e


def fit_ar(train: Sequence[float], p: int) -> ArimaModel:
    """Least-squares AR(p) with intercept over t = p..n-1"""
    x = np.asarray(train, dtype=float)
    if p <= 0:
        raise EstimationError(f"AR order must be positive, got {p}")
    if len(x) <= p + 1:
        raise DataError(f"AR({p}) needs more than {p + 1} observations, got {len(x)}")

    design = np.column_stack([np.ones(len(x) - p), _lag_matrix(x, p)])
    target = x[p:]
    beta = _ridge_solve(design, target)
    residuals = target - design @ beta

    phi = beta[1:]
    stationary = ar_is_stationary(phi)
    if not stationary:
        logger.warning(f"⚠️ Fitted AR({p}) is not stationary")
    return ArimaModel(
        ar_coeffs=phi,
        ma_coeffs=np.zeros(0),
        intercept=float(beta[0]),
        diff_order=0,
        noise_variance=float(np.mean(residuals ** 2)),
        flags={"stationary": stationary, "converged": True, "method": "ols"},
    )


def _innovations(
    w: np.ndarray, phi: np.ndarray, theta: np.ndarray, intercept: float
) -> np.ndarray:
    """One-step innovations with e_t = 0 for t < max(p, q)"""
    p, q = len(phi), len(theta)
    start = max(p, q)
    n = len(w)
    innovations = np.zeros(n)
    if n <= start:
        return innovations

    u = w[start:] - intercept
    for i in range(1, p + 1):
        u = u - phi[i - 1] * w[start - i : n - i]
    innovations[start:] = lfilter([1.0], np.r_[1.0, theta], u) if q else u
    return innovations


def conditional_sum_of_squares(
    w: Sequence[float], phi: Sequence[float], theta: Sequence[float], intercept: float
) -> float:
    w = np.asarray(w, dtype=float)
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    start = max(len(phi), len(theta))
    with np.errstate(over="ignore", invalid="ignore"):
        e = _innovations(w, phi, theta, intercept)[start:]
        css = float(np.dot(e, e))
    return css if np.isfinite(css) else np.inf


def _hannan_rissanen(w: np.ndarray, p: int, q: int) -> np.ndarray:
    """Initial [c, phi..., theta...] from a long AR and a residual regression"""
    n = len(w)
    long_order = min(max(2 * (p + q), 10), (n - 1) // 4)
    long_order = max(long_order, 1)
    long_ar = fit_ar(w, long_order)
    residuals = _innovations(w, long_ar.ar_coeffs, np.zeros(0), long_ar.intercept)

    start = long_order + max(p, q)
    if n - start <= p + q + 1:
        return np.zeros(1 + p + q)

    columns = [np.ones(n - start)]
    columns += [w[start - i : n - i] for i in range(1, p + 1)]
    columns += [residuals[start - j : n - j] for j in range(1, q + 1)]
    return _ridge_solve(np.column_stack(columns), w[start:])


def fit_arma(
    train: Sequence[float],
    p: int,
    q: int,
    max_iterations: int = CSS_MAX_ITERATIONS,
    tolerance: float = CSS_RELATIVE_TOLERANCE,
) -> ArimaModel:
    """
    Conditional-sum-of-squares ARMA(p, q)

    Args:
        train: Scaled training values
        p: AR order (>= 0)
        q: MA order (>= 0), p + q >= 1
        max_iterations: Simplex iteration cap
        tolerance: Stop once the relative CSS improvement falls below this

    Returns:
        ArimaModel with flags: converged, iterations, stationary, css_history
    """
    x = np.asarray(train, dtype=float)
    if p < 0 or q < 0 or p + q < 1:
        raise EstimationError(f"Invalid ARMA orders p={p}, q={q}")
    if len(x) <= p + q + 1:
        raise DataError(f"ARMA({p},{q}) needs more than {p + q + 1} observations, got {len(x)}")

    # With no MA part the CSS minimiser is the least-squares AR fit
    if q == 0:
        return fit_ar(x, p)

    def objective(params: np.ndarray) -> float:
        return conditional_sum_of_squares(x, params[1 : 1 + p], params[1 + p :], params[0])

    initial = _hannan_rissanen(x, p, q)
    initial_css = objective(initial)
    if not np.isfinite(initial_css):
        initial = np.zeros(1 + p + q)
        initial[0] = x.mean()
        initial_css = objective(initial)

    css_history: List[float] = [initial_css]

    def record(xk: np.ndarray) -> None:
        css_history.append(objective(xk))

    result = minimize(
        objective,
        initial,
        method="Nelder-Mead",
        callback=record,
        options={
            "maxiter": max_iterations,
            "xatol": 1e-8,
            "fatol": tolerance * max(initial_css, np.finfo(float).tiny),
        },
    )
    best = result.x
    css = float(result.fun)
    converged = bool(result.success)
    if not converged:
        logger.warning(f"⚠️ ARMA({p},{q}) simplex search stopped early: {result.message}")

    n_terms = len(x) - max(p, q)
    phi = best[1 : 1 + p]
    stationary = ar_is_stationary(phi)
    logger.info(f"✅ ARMA({p},{q}) fitted: css={css:.6g} after {result.nit} iterations")
    return ArimaModel(
        ar_coeffs=phi,
        ma_coeffs=best[1 + p :],
        intercept=float(best[0]),
        diff_order=0,
        noise_variance=css / n_terms,
        flags={
            "stationary": stationary,
            "converged": converged,
            "iterations": int(result.nit),
            "method": "css",
            "css_history": css_history,
        },
    )


def fit_arima(train: Sequence[float], p: int, d: int, q: int, **kwargs) -> ArimaModel:
    """Difference d times, fit ARMA(p, q) on the result and remember d"""
    x = np.asarray(train, dtype=float)
    if d < 0:
        raise EstimationError(f"Differencing order must be >= 0, got {d}")
    if len(x) <= p + q + d + 1:
        raise DataError(
            f"ARIMA({p},{d},{q}) needs more than {p + q + d + 1} observations, got {len(x)}"
        )

    w = np.diff(x, n=d) if d else x
    if p == 0 and q == 0:
        # Drift-only model on the differenced series
        return ArimaModel(
            ar_coeffs=np.zeros(0),
            ma_coeffs=np.zeros(0),
            intercept=float(w.mean()),
            diff_order=d,
            noise_variance=float(np.var(w)),
            flags={"stationary": True, "converged": True, "method": "mean"},
        )

    model = fit_arma(w, p, q, **kwargs)
    return replace(model, diff_order=d)


def random_walk_model() -> ArimaModel:
    """ARIMA(0,1,0) without drift: the persistence forecast"""
    return ArimaModel(
        ar_coeffs=np.zeros(0),
        ma_coeffs=np.zeros(0),
        intercept=0.0,
        diff_order=1,
        flags={"stationary": True, "method": "fixed"},
    )


def _integration_weights(d: int) -> np.ndarray:
    """Weights a_k so that x_t = w_t + sum_k a_k x_{t-k} undoes d-fold differencing"""
    return np.array([-((-1) ** k) * comb(d, k, exact=True) for k in range(1, d + 1)], dtype=float)


def forecast_one_step(model: ArimaModel, history: Sequence[float]) -> float:
    """Next-value prediction on the original (undifferenced) scale of `history`"""
    x = np.asarray(history, dtype=float)
    p, d, q = model.orders
    needed = max(p + d, 1)
    if len(x) < needed:
        raise DataError(
            f"ARIMA({p},{d},{q}) needs at least {needed} history values, got {len(x)}"
        )

    w = np.diff(x, n=d) if d else x
    e = _innovations(w, model.ar_coeffs, model.ma_coeffs, model.intercept)
    n = len(w)

    prediction = model.intercept
    for i in range(1, p + 1):
        prediction += model.ar_coeffs[i - 1] * w[n - i]
    for j in range(1, q + 1):
        if n - j >= 0:
            prediction += model.ma_coeffs[j - 1] * e[n - j]

    if d:
        prediction += float(np.dot(_integration_weights(d), x[::-1][:d]))
    return float(prediction)


def _static_path(model: ArimaModel, warmup: np.ndarray, horizon: int) -> np.ndarray:
    """Recursive forecasts: each prediction is fed back as if observed, future innovations zero"""
    p, d, q = model.orders
    x_ext = list(warmup)
    w = np.diff(warmup, n=d) if d else warmup
    w_ext = list(w)
    e_ext = list(_innovations(w, model.ar_coeffs, model.ma_coeffs, model.intercept))
    phi = model.ar_coeffs.tolist()
    theta = model.ma_coeffs.tolist()
    weights = _integration_weights(d).tolist()

    predictions = np.empty(horizon)
    for h in range(horizon):
        w_hat = model.intercept
        for i in range(1, p + 1):
            w_hat += phi[i - 1] * w_ext[-i]
        for j in range(1, q + 1):
            if j <= len(e_ext):
                w_hat += theta[j - 1] * e_ext[-j]
        x_hat = w_hat + sum(a * x_ext[-k] for k, a in enumerate(weights, start=1))
        w_ext.append(w_hat)
        e_ext.append(0.0)
        x_ext.append(x_hat)
        predictions[h] = x_hat
    return predictions


def rolling_forecast(
    model: ArimaModel,
    test: Sequence[float],
    warmup: Sequence[float],
    mode: str = "rolling",
    timestamps: Optional[pd.DatetimeIndex] = None,
) -> ForecastSeries:
    """
    Predict every test point

    Args:
        model: Fitted model
        test: Values to predict (same units as the model)
        warmup: History immediately preceding the test region
        mode: "rolling" uses the true history up to each point; "static" recurses on
            its own predictions over the whole horizon
        timestamps: Optional test timestamps carried into the result
    """
    if mode not in FORECAST_MODES:
        raise DataError(f"Unknown forecast mode '{mode}', expected one of {FORECAST_MODES}")
    test = np.asarray(test, dtype=float)
    warmup = np.asarray(warmup, dtype=float)
    p, d, q = model.orders
    needed = max(d + max(p, q), 1)
    if len(warmup) < needed:
        raise DataError(f"Warm-up of {len(warmup)} values is shorter than the {needed} required")

    if mode == "static":
        predicted = _static_path(model, warmup, len(test))
    else:
        full = np.concatenate([warmup, test])
        w = np.diff(full, n=d) if d else full
        e = _innovations(w, model.ar_coeffs, model.ma_coeffs, model.intercept)
        # x_s - e_{s-d} is the one-step prediction of x_s from x_{<s}
        predicted = full[len(warmup) :] - e[len(warmup) - d :]
    return ForecastSeries(timestamps=timestamps, predicted=predicted, actual=test)


def moving_average_forecast(history: Sequence[float], window: int, horizon: int = 1) -> np.ndarray:
    """
    Mean of the last `window` observations; for horizon > 1 each forecast joins the window
    """
    history = np.asarray(history, dtype=float)
    if window < 1:
        raise DataError(f"Moving-average window must be at least 1, got {window}")
    if window > len(history):
        raise DataError(f"Window {window} exceeds history length {len(history)}")
    if horizon < 1:
        raise DataError(f"Horizon must be at least 1, got {horizon}")

    buffer = list(history[-window:])
    forecasts = np.empty(horizon)
    for h in range(horizon):
        forecasts[h] = np.mean(buffer[-window:])
        buffer.append(forecasts[h])
    return forecasts


def information_criteria(model: ArimaModel, n_obs: int) -> Dict[str, float]:
    """CSS-based AIC/BIC; a hook for order selection, not used automatically"""
    if model.noise_variance <= 0 or n_obs <= 0:
        raise EstimationError("Information criteria need positive noise variance and sample size")
    k = model.p + model.q + 1
    log_likelihood_term = n_obs * np.log(model.noise_variance)
    return {
        "aic": float(log_likelihood_term + 2 * k),
        "bic": float(log_likelihood_term + k * np.log(n_obs)),
    }


def save_model(model: ArimaModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(model.to_dict(), f, indent=2, sort_keys=True)


def load_model(path: str) -> ArimaModel:
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise CheckpointError(f"Could not read model file {path}: {e}") from e
    return ArimaModel.from_dict(payload)


class ArimaForecaster:
    """Evaluates an ArimaModel on MWh values, scaling in and out when a scaler is given"""

    def __init__(self, name: str, model: ArimaModel, scaler: Optional[ScalerParams] = None):
        self.name = name
        self.model = model
        self.scaler = scaler

    def predict(self, warmup: np.ndarray, test: np.ndarray, mode: str = "rolling") -> np.ndarray:
        if self.scaler is None:
            return rolling_forecast(self.model, test, warmup, mode=mode).predicted
        forecast = rolling_forecast(
            self.model, scale(test, self.scaler), scale(warmup, self.scaler), mode=mode
        )
        return inverse_scale(forecast.predicted, self.scaler)


class PersistenceForecaster(ArimaForecaster):
    def __init__(self, name: str = "persistence"):
        super().__init__(name, random_walk_model())


class MovingAverageForecaster:
    """Rolling: mean of the previous `window` true values. Static: recursive smoothing"""

    def __init__(self, window: int = 24, name: str = "ma"):
        if window < 1:
            raise DataError(f"Moving-average window must be at least 1, got {window}")
        self.name = name
        self.window = window

    def predict(self, warmup: np.ndarray, test: np.ndarray, mode: str = "rolling") -> np.ndarray:
        warmup = np.asarray(warmup, dtype=float)
        test = np.asarray(test, dtype=float)
        if mode not in FORECAST_MODES:
            raise DataError(f"Unknown forecast mode '{mode}', expected one of {FORECAST_MODES}")
        if mode == "static":
            return moving_average_forecast(warmup, self.window, len(test))
        if self.window > len(warmup):
            raise DataError(f"Window {self.window} exceeds warm-up length {len(warmup)}")

        full = np.concatenate([warmup, test])
        windows = np.lib.stride_tricks.sliding_window_view(full, self.window)
        start = len(warmup) - self.window
        return windows[start : start + len(test)].mean(axis=1)


class ColumnForecaster:
    """Replays an existing forecast column (e.g. the operator's day-ahead forecast)"""

    def __init__(self, name: str, values: np.ndarray):
        self.name = name
        self.values = np.asarray(values, dtype=float)

    def predict(self, warmup: np.ndarray, test: np.ndarray, mode: str = "rolling") -> np.ndarray:
        if len(self.values) != len(test):
            raise DataError(
                f"Forecast column '{self.name}' has {len(self.values)} values for {len(test)} test points"
            )
        if np.isnan(self.values).any():
            raise DataError(f"Forecast column '{self.name}' has missing values in the test region")
        return self.values
