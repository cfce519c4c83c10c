# gridcast/utils/lstm_utils.py
"""
From-scratch LSTM regressor: LSTM layer -> dropout -> dense head, trained with Adam on MSE

Gate blocks are stacked in the order [input i; forget f; candidate g; output o] and act
on the concatenation [x_t; h_{t-1}]. All arithmetic is float64.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from gridcast.utils.baseline_utils import ForecastSeries
from gridcast.utils.data_utils import ScalerParams, WindowedDataset, inverse_scale, scale
from gridcast.utils.errors import (
    CheckpointError,
    DataError,
    ShapeError,
    TrainingDivergenceError,
)

logger = logging.getLogger(__name__)

CHECKPOINT_SCHEMA_VERSION = 1
GATE_NAMES = ("i", "f", "g", "o")
PARAM_NAMES = ("W", "b", "dense_w", "dense_b")


class LstmConfig(BaseModel):
    """Network shape and training hyperparameters (defaults reproduce the reference model)"""

    model_config = ConfigDict(extra="forbid")

    hidden_size: int = Field(100, ge=1)
    input_size: int = Field(25, ge=1)
    seq_len: int = Field(1, ge=1)
    dropout_rate: float = Field(0.2, ge=0.0, lt=1.0)
    epochs: int = Field(50, ge=1)
    batch_size: int = Field(70, ge=1)
    learning_rate: float = Field(0.001, gt=0.0)
    # per-epoch multiplier on learning_rate; 1.0 keeps it constant
    lr_decay: float = Field(1.0, gt=0.0, le=1.0)
    seed: int = 42

    @property
    def lookback(self) -> int:
        return self.seq_len * self.input_size


@dataclass(eq=False)
class LstmParams:
    W: np.ndarray        # (4H, D + H)
    b: np.ndarray        # (4H,)
    dense_w: np.ndarray  # (H,)
    dense_b: np.ndarray  # (1,)

    @property
    def hidden_size(self) -> int:
        return self.dense_w.shape[0]

    @property
    def input_size(self) -> int:
        return self.W.shape[1] - self.hidden_size

    def arrays(self) -> Dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def copy(self) -> "LstmParams":
        return LstmParams(**{name: array.copy() for name, array in self.arrays().items()})

    def count(self) -> Tuple[int, int]:
        return self.W.size + self.b.size, self.dense_w.size + self.dense_b.size

    @classmethod
    def zeros_like(cls, other: "LstmParams") -> "LstmParams":
        return cls(**{name: np.zeros_like(array) for name, array in other.arrays().items()})

    def gate(self, name: str) -> Tuple[np.ndarray, np.ndarray]:
        """Weight and bias block of one gate"""
        H = self.hidden_size
        k = GATE_NAMES.index(name)
        return self.W[k * H : (k + 1) * H], self.b[k * H : (k + 1) * H]


@dataclass(eq=False)
class LstmState:
    h: np.ndarray
    c: np.ndarray

    @classmethod
    def zeros(cls, hidden_size: int, batch_size: Optional[int] = None) -> "LstmState":
        shape = (hidden_size,) if batch_size is None else (batch_size, hidden_size)
        return cls(h=np.zeros(shape), c=np.zeros(shape))


@dataclass(eq=False)
class CellCache:
    """Activations of one time step kept for the backward pass"""

    z: np.ndarray        # [x_t; h_{t-1}]
    gates: np.ndarray    # pre-activations, (..., 4H)
    i: np.ndarray
    f: np.ndarray
    g: np.ndarray
    o: np.ndarray
    c_prev: np.ndarray
    tanh_c: np.ndarray


@dataclass(eq=False)
class ForwardCache:
    params: LstmParams
    steps: List[CellCache]
    h_last: np.ndarray
    dropout_mask: Optional[np.ndarray]
    predictions: np.ndarray


@dataclass(eq=False)
class AdamState:
    m: LstmParams
    v: LstmParams
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    @classmethod
    def create(cls, params: LstmParams) -> "AdamState":
        return cls(m=LstmParams.zeros_like(params), v=LstmParams.zeros_like(params))


@dataclass
class TrainingLog:
    train_loss: List[float] = field(default_factory=list)
    validation_loss: List[Optional[float]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.train_loss)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "epoch": np.arange(1, len(self.train_loss) + 1),
                "train_loss": self.train_loss,
                "val_loss": self.validation_loss,
            }
        )

    def to_csv(self, path: str) -> None:
        self.to_frame().to_csv(path, index=False)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    # Split by sign so large |x| never overflows exp
    out = np.empty_like(x)
    positive = x >= 0
    out[positive] = 1.0 / (1.0 + np.exp(-x[positive]))
    exp_x = np.exp(x[~positive])
    out[~positive] = exp_x / (1.0 + exp_x)
    return out


def param_count(config: LstmConfig) -> Tuple[int, int]:
    """(recurrent, dense) trainable parameter counts"""
    H, D = config.hidden_size, config.input_size
    return 4 * (H * (D + H) + H), H + 1


def init_params(config: LstmConfig, seed: Optional[int] = None) -> LstmParams:
    """Glorot-uniform blocks per gate, zero biases except forget-gate bias 1.0"""
    rng = np.random.default_rng(config.seed if seed is None else seed)
    H, D = config.hidden_size, config.input_size

    gate_limit = math.sqrt(6.0 / ((D + H) + H))
    W = np.concatenate(
        [rng.uniform(-gate_limit, gate_limit, size=(H, D + H)) for _ in GATE_NAMES]
    )
    b = np.zeros(4 * H)
    b[H : 2 * H] = 1.0

    dense_limit = math.sqrt(6.0 / (H + 1))
    dense_w = rng.uniform(-dense_limit, dense_limit, size=H)
    return LstmParams(W=W, b=b, dense_w=dense_w, dense_b=np.zeros(1))


def cell_forward(
    x_t: np.ndarray, state: LstmState, params: LstmParams
) -> Tuple[LstmState, CellCache]:
    """One LSTM step; works on a single vector (D,) or a batch (B, D)"""
    H = params.hidden_size
    z = np.concatenate([x_t, state.h], axis=-1)
    gates = z @ params.W.T + params.b

    i = _sigmoid(gates[..., :H])
    f = _sigmoid(gates[..., H : 2 * H])
    g = np.tanh(gates[..., 2 * H : 3 * H])
    o = _sigmoid(gates[..., 3 * H :])

    c = f * state.c + i * g
    tanh_c = np.tanh(c)
    h = o * tanh_c
    cache = CellCache(z=z, gates=gates, i=i, f=f, g=g, o=o, c_prev=state.c, tanh_c=tanh_c)
    return LstmState(h=h, c=c), cache


def make_dropout_mask(
    rng: np.random.Generator, shape: Tuple[int, ...], rate: float
) -> Optional[np.ndarray]:
    """Inverted dropout: kept units are scaled by 1 / (1 - rate)"""
    if rate <= 0.0:
        return None
    return (rng.random(shape) >= rate) / (1.0 - rate)


def forward_batch(
    windows: np.ndarray, params: LstmParams, dropout_mask: Optional[np.ndarray] = None
) -> Tuple[np.ndarray, ForwardCache]:
    """Run a batch of windows (B, T, D) from a zero state; returns predictions (B,)"""
    if windows.ndim != 3 or windows.shape[2] != params.input_size:
        raise ShapeError(
            f"Expected windows of shape (B, T, {params.input_size}), got {windows.shape}"
        )
    batch_size, seq_len, _ = windows.shape
    state = LstmState.zeros(params.hidden_size, batch_size)

    steps = []
    for t in range(seq_len):
        state, cache = cell_forward(windows[:, t, :], state, params)
        steps.append(cache)

    h_last = state.h
    if dropout_mask is not None:
        if dropout_mask.shape != h_last.shape:
            raise ShapeError(f"Dropout mask shape {dropout_mask.shape} != {h_last.shape}")
        h_last = h_last * dropout_mask

    predictions = h_last @ params.dense_w + params.dense_b[0]
    return predictions, ForwardCache(
        params=params,
        steps=steps,
        h_last=h_last,
        dropout_mask=dropout_mask,
        predictions=predictions,
    )


def network_forward(
    window: np.ndarray, params: LstmParams, dropout_mask: Optional[np.ndarray] = None
) -> float:
    """Scalar prediction for one window of shape (T, D)"""
    window = np.asarray(window, dtype=float)
    if window.ndim != 2:
        raise ShapeError(f"Expected a (T, D) window, got shape {window.shape}")
    mask = None if dropout_mask is None else np.asarray(dropout_mask, dtype=float)[None, :]
    predictions, _ = forward_batch(window[None, :, :], params, mask)
    return float(predictions[0])


def mse_loss(predictions: Sequence[float], targets: Sequence[float]) -> float:
    predictions = np.asarray(predictions, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if predictions.size == 0:
        raise DataError("mse_loss needs at least one value")
    if predictions.shape != targets.shape:
        raise ShapeError(f"mse_loss got shapes {predictions.shape} and {targets.shape}")
    residuals = predictions - targets
    return float(np.mean(residuals * residuals))


def backward(targets: np.ndarray, params: LstmParams, cache: ForwardCache) -> LstmParams:
    """Exact gradients of the batch-mean MSE with respect to every parameter (BPTT)"""
    targets = np.asarray(targets, dtype=float)
    if cache.params is not params:
        raise ShapeError("Forward cache was produced with different parameters")
    if targets.shape != cache.predictions.shape:
        raise ShapeError(
            f"Targets shape {targets.shape} does not match cached batch {cache.predictions.shape}"
        )

    H = params.hidden_size
    D = params.input_size
    grads = LstmParams.zeros_like(params)

    d_pred = 2.0 * (cache.predictions - targets) / targets.size
    grads.dense_w[:] = cache.h_last.T @ d_pred
    grads.dense_b[0] = d_pred.sum()

    dh = np.outer(d_pred, params.dense_w)
    if cache.dropout_mask is not None:
        dh = dh * cache.dropout_mask
    dc = np.zeros_like(dh)

    for step in reversed(cache.steps):
        d_o = dh * step.tanh_c
        dc = dc + dh * step.o * (1.0 - step.tanh_c ** 2)

        d_gates = np.concatenate(
            [
                dc * step.g * step.i * (1.0 - step.i),
                dc * step.c_prev * step.f * (1.0 - step.f),
                dc * step.i * (1.0 - step.g ** 2),
                d_o * step.o * (1.0 - step.o),
            ],
            axis=-1,
        )
        grads.W += d_gates.T @ step.z
        grads.b += d_gates.sum(axis=0)

        dz = d_gates @ params.W
        dh = dz[:, D:]
        dc = dc * step.f

    return grads


def adam_step(
    params: LstmParams, gradients: LstmParams, state: AdamState, lr: float
) -> Tuple[LstmParams, AdamState]:
    """One bias-corrected Adam update; returns new params and state"""
    t = state.t + 1
    bc1 = 1.0 - state.beta1 ** t
    bc2 = 1.0 - state.beta2 ** t

    new_params, new_m, new_v = {}, {}, {}
    for name in PARAM_NAMES:
        g = getattr(gradients, name)
        if g.shape != getattr(params, name).shape:
            raise ShapeError(f"Gradient '{name}' has shape {g.shape}")
        m = state.beta1 * getattr(state.m, name) + (1.0 - state.beta1) * g
        v = state.beta2 * getattr(state.v, name) + (1.0 - state.beta2) * (g * g)
        m_hat = m / bc1
        v_hat = v / bc2
        new_params[name] = getattr(params, name) - lr * m_hat / (np.sqrt(v_hat) + state.epsilon)
        new_m[name] = m
        new_v[name] = v

    new_state = AdamState(
        m=LstmParams(**new_m),
        v=LstmParams(**new_v),
        t=t,
        beta1=state.beta1,
        beta2=state.beta2,
        epsilon=state.epsilon,
    )
    return LstmParams(**new_params), new_state


def _as_windows(inputs: np.ndarray, config: LstmConfig) -> np.ndarray:
    inputs = np.asarray(inputs, dtype=float)
    if inputs.ndim != 2 or inputs.shape[1] != config.lookback:
        raise ShapeError(
            f"Inputs of shape {inputs.shape} do not fit seq_len={config.seq_len} x "
            f"input_size={config.input_size}"
        )
    return inputs.reshape(len(inputs), config.seq_len, config.input_size)


def predict_windows(params: LstmParams, inputs: np.ndarray, config: LstmConfig) -> np.ndarray:
    """Inference (no dropout) over flattened windows (n, lookback)"""
    predictions, _ = forward_batch(_as_windows(inputs, config), params)
    return predictions


def train(
    dataset: WindowedDataset,
    config: LstmConfig,
    validation: Optional[WindowedDataset] = None,
    progress: bool = False,
) -> Tuple[LstmParams, TrainingLog, AdamState]:
    """
    Minibatch Adam on MSE over seeded shuffles; the last partial batch is kept

    Args:
        dataset: Training windows in scaled units
        config: Network and optimiser settings
        validation: Held-out windows for the per-epoch validation loss
        progress: Show a tqdm bar over epochs

    Returns:
        Trained parameters, per-epoch losses and the final optimiser state
    """
    if len(dataset) == 0:
        raise DataError("Cannot train on an empty dataset")

    init_seed, train_seed = np.random.SeedSequence(config.seed).spawn(2)
    params = init_params(config, seed=init_seed.generate_state(1)[0])
    rng = np.random.default_rng(train_seed)
    adam = AdamState.create(params)

    windows = _as_windows(dataset.inputs, config)
    targets = np.asarray(dataset.targets, dtype=float)
    val_windows = None if validation is None else _as_windows(validation.inputs, config)

    n = len(targets)
    log = TrainingLog()
    recurrent, dense = param_count(config)
    logger.info(
        f"🔄 Training LSTM on {n} windows: {recurrent} + {dense} parameters, "
        f"{config.epochs} epochs, batch {config.batch_size}"
    )

    epochs = tqdm(range(1, config.epochs + 1), desc="epochs", disable=not progress, leave=False)
    for epoch in epochs:
        learning_rate = config.learning_rate * config.lr_decay ** (epoch - 1)
        order = rng.permutation(n)
        weighted_loss = 0.0
        for batch_index, start in enumerate(range(0, n, config.batch_size)):
            idx = order[start : start + config.batch_size]
            mask = make_dropout_mask(rng, (len(idx), config.hidden_size), config.dropout_rate)
            predictions, cache = forward_batch(windows[idx], params, mask)
            loss = mse_loss(predictions, targets[idx])
            if not np.isfinite(loss):
                raise TrainingDivergenceError(epoch, batch_index, loss)

            gradients = backward(targets[idx], params, cache)
            params, adam = adam_step(params, gradients, adam, learning_rate)
            weighted_loss += loss * len(idx)

        train_loss = weighted_loss / n
        val_loss = None
        if val_windows is not None:
            val_predictions, _ = forward_batch(val_windows, params)
            val_loss = mse_loss(val_predictions, validation.targets)
            if not np.isfinite(val_loss):
                raise TrainingDivergenceError(epoch, -1, val_loss)

        log.train_loss.append(train_loss)
        log.validation_loss.append(val_loss)
        val_text = "n/a" if val_loss is None else f"{val_loss:.6g}"
        logger.info(f"📉 epoch {epoch}/{config.epochs} train={train_loss:.6g} val={val_text}")
        epochs.set_postfix(train=f"{train_loss:.4g}")

    logger.info(f"✅ Training finished: final train loss {log.train_loss[-1]:.6g}")
    return params, log, adam


def predict_series(
    params: LstmParams,
    history: Sequence[float],
    test_length: int,
    config: LstmConfig,
    scaler: ScalerParams,
    timestamps: Optional[pd.DatetimeIndex] = None,
) -> ForecastSeries:
    """
    Rolling one-step predictions for the last `test_length` points of `history`

    Args:
        params: Trained network
        history: Scaled series ending with the test region (true observed values)
        test_length: Number of trailing points to predict
        config: Network shape
        scaler: Scaler used to map predictions back to MWh
        timestamps: Optional test timestamps carried into the result
    """
    history = np.asarray(history, dtype=float)
    lookback = config.lookback
    if test_length < 1:
        raise DataError(f"test_length must be at least 1, got {test_length}")
    if len(history) < test_length + lookback:
        raise DataError(
            f"History of {len(history)} values cannot cover {test_length} predictions "
            f"with lookback {lookback}"
        )

    start = len(history) - test_length
    windows = np.lib.stride_tricks.sliding_window_view(history, lookback)
    inputs = windows[start - lookback : start - lookback + test_length]
    predicted = inverse_scale(predict_windows(params, inputs, config), scaler)
    actual = inverse_scale(history[start:], scaler)
    return ForecastSeries(timestamps=timestamps, predicted=predicted, actual=actual)


class LstmForecaster:
    """Adapter used by the model comparison: MWh in, MWh out"""

    def __init__(self, params: LstmParams, config: LstmConfig, scaler: ScalerParams, name: str = "lstm"):
        self.name = name
        self.params = params
        self.config = config
        self.scaler = scaler

    def predict(self, warmup: np.ndarray, test: np.ndarray, mode: str = "rolling") -> np.ndarray:
        warmup_s = scale(warmup, self.scaler)
        if mode == "static":
            return inverse_scale(self._recursive(warmup_s, len(test)), self.scaler)
        history = np.concatenate([warmup_s, scale(test, self.scaler)])
        return predict_series(self.params, history, len(test), self.config, self.scaler).predicted

    def _recursive(self, warmup_s: np.ndarray, horizon: int) -> np.ndarray:
        lookback = self.config.lookback
        if len(warmup_s) < lookback:
            raise DataError(f"Warm-up of {len(warmup_s)} values is shorter than lookback {lookback}")
        buffer = list(warmup_s[-lookback:])
        predictions = np.empty(horizon)
        for h in range(horizon):
            window = np.asarray(buffer[-lookback:]).reshape(self.config.seq_len, self.config.input_size)
            predictions[h] = network_forward(window, self.params)
            buffer.append(predictions[h])
        return predictions


def _weights_payload(params: LstmParams) -> Dict[str, List[float]]:
    payload = {}
    for gate in GATE_NAMES:
        W_gate, b_gate = params.gate(gate)
        payload[f"W_{gate}"] = W_gate.ravel().tolist()
        payload[f"b_{gate}"] = b_gate.tolist()
    payload["dense_w"] = params.dense_w.tolist()
    payload["dense_b"] = params.dense_b.tolist()
    return payload


def _params_from_payload(payload: Dict[str, List[float]], config: LstmConfig) -> LstmParams:
    H, D = config.hidden_size, config.input_size
    try:
        W = np.concatenate(
            [np.asarray(payload[f"W_{gate}"], dtype=float).reshape(H, D + H) for gate in GATE_NAMES]
        )
        b = np.concatenate([np.asarray(payload[f"b_{gate}"], dtype=float) for gate in GATE_NAMES])
        dense_w = np.asarray(payload["dense_w"], dtype=float)
        dense_b = np.asarray(payload["dense_b"], dtype=float)
    except (KeyError, ValueError) as e:
        raise CheckpointError(f"Checkpoint weights do not match the stored config: {e}") from e
    if b.shape != (4 * H,) or dense_w.shape != (H,) or dense_b.shape != (1,):
        raise CheckpointError("Checkpoint weight shapes do not match the stored config")
    return LstmParams(W=W, b=b, dense_w=dense_w, dense_b=dense_b)


def save_checkpoint(
    path: str,
    params: LstmParams,
    config: LstmConfig,
    scaler: Optional[ScalerParams] = None,
    adam: Optional[AdamState] = None,
) -> None:
    """Versioned JSON checkpoint; identical inputs give byte-identical files"""
    payload: Dict[str, Any] = {
        "schema_version": CHECKPOINT_SCHEMA_VERSION,
        "config": config.model_dump(),
        "scaler": None if scaler is None else scaler.to_dict(),
        "weights": _weights_payload(params),
    }
    if adam is not None:
        payload["adam"] = {
            "t": adam.t,
            "beta1": adam.beta1,
            "beta2": adam.beta2,
            "epsilon": adam.epsilon,
            "m": _weights_payload(adam.m),
            "v": _weights_payload(adam.v),
        }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, sort_keys=True)


def load_checkpoint(
    path: str,
) -> Tuple[LstmParams, LstmConfig, Optional[ScalerParams], Optional[AdamState]]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise CheckpointError(f"Could not read checkpoint {path}: {e}") from e

    if payload.get("schema_version") != CHECKPOINT_SCHEMA_VERSION:
        raise CheckpointError(f"Unsupported checkpoint schema_version {payload.get('schema_version')}")

    config = LstmConfig(**payload["config"])
    params = _params_from_payload(payload["weights"], config)
    scaler = None if payload.get("scaler") is None else ScalerParams(**payload["scaler"])

    adam = None
    if "adam" in payload:
        stored = payload["adam"]
        adam = AdamState(
            m=_params_from_payload(stored["m"], config),
            v=_params_from_payload(stored["v"], config),
            t=int(stored["t"]),
            beta1=stored["beta1"],
            beta2=stored["beta2"],
            epsilon=stored["epsilon"],
        )
    logger.info(f"✅ Loaded checkpoint {path}")
    return params, config, scaler, adam


def count_checkpoint_values(path: str) -> int:
    """Number of trainable values stored in a checkpoint"""
    params, _, _, _ = load_checkpoint(path)
    return sum(params.count())
