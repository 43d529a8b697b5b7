"""A small multilayer perceptron for binary classification, written in numpy.

ReLU hidden layers, a sigmoid output, binary cross-entropy with an optional
L2 penalty per weight matrix, and Adam.  :func:`train_with_snapshots`
records the network's probabilities after every epoch so the epochs can
later be combined into an ensemble.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import as_binary
from .ensemble import EpochSnapshot
from .errors import AlignmentError, DegenerateDataError, DivergenceError, DomainError, ParseError

PROB_EPS = 1e-7
MODEL_FORMAT_VERSION = 1

Params = list[tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class MlpConfig:
    layer_sizes: tuple[int, ...]
    l2_per_layer: tuple[float, ...] | None = None
    seed: int = 0

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.layer_sizes)
        if len(sizes) < 2 or any(s < 1 for s in sizes):
            raise DomainError(f"layer sizes must be >= 2 positive integers, got {self.layer_sizes}")
        if sizes[-1] != 1:
            raise DomainError("output layer must have width 1")
        l2 = self.l2_per_layer
        l2 = (0.0,) * (len(sizes) - 1) if l2 is None else tuple(float(v) for v in l2)
        if len(l2) != len(sizes) - 1 or any(v < 0 for v in l2):
            raise DomainError(f"need {len(sizes) - 1} nonnegative L2 coefficients, got {self.l2_per_layer}")
        object.__setattr__(self, "layer_sizes", sizes)
        object.__setattr__(self, "l2_per_layer", l2)

    @classmethod
    def deep(cls, n_features: int, hidden: Sequence[int] = (64, 64, 32, 32, 16, 16, 8), l2_first: int = 2,
             l2: float = 0.01, seed: int = 0) -> MlpConfig:
        """Seven ReLU hidden layers with L2 on the first ``l2_first`` weight matrices."""
        sizes = (n_features, *hidden, 1)
        coeffs = tuple(l2 if i < l2_first else 0.0 for i in range(len(sizes) - 1))
        return cls(sizes, coeffs, seed)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    learning_rate: float = 1e-3
    batch_size: int = 72
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    shuffle_seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise DomainError("epochs must be >= 1")
        if self.learning_rate < 0:
            raise DomainError("learning rate must be >= 0")
        if self.batch_size < 1:
            raise DomainError("batch size must be >= 1")
        if not (0 < self.beta1 < 1 and 0 < self.beta2 < 1):
            raise DomainError("Adam betas must lie in (0, 1)")


def init_params(cfg: MlpConfig) -> Params:
    """Uniform weights in ``±1/sqrt(fan_in)``, zero biases."""
    rng = np.random.default_rng(cfg.seed)
    params = []
    for fan_in, fan_out in zip(cfg.layer_sizes[:-1], cfg.layer_sizes[1:]):
        bound = 1.0 / math.sqrt(fan_in)
        params.append((rng.uniform(-bound, bound, size=(fan_in, fan_out)), np.zeros(fan_out)))
    return params


def _as_features(x, width: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != width:
        raise DomainError(f"expected feature width {width}, got shape {x.shape}")
    return x


def _forward_pass(params: Params, x: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
    """Activations of every layer and the output pre-activation."""
    acts = [x]
    a = x
    for w, b in params[:-1]:
        a = np.maximum(a @ w + b, 0.0)
        acts.append(a)
    w, b = params[-1]
    return acts, (a @ w + b)[:, 0]


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def forward(params: Params, x) -> np.ndarray:
    """Probabilities for a batch (or a single feature vector), clamped to ``[eps, 1 - eps]``."""
    x = _as_features(x, params[0][0].shape[0])
    _, z = _forward_pass(params, x)
    return np.clip(_sigmoid(z), PROB_EPS, 1.0 - PROB_EPS)


def loss_and_gradient(params: Params, x, y, l2_per_layer: Sequence[float] | None = None) -> tuple[float, Params]:
    """Mean binary cross-entropy plus ``sum_l lambda_l * ||W_l||^2`` and its exact gradient.

    The clamp on the output is part of the loss, so samples whose probability
    sits on the clamp contribute zero gradient.
    """
    x = _as_features(x, params[0][0].shape[0])
    y = np.asarray(y, dtype=np.float64)
    if len(x) == 0:
        raise DomainError("empty batch")
    if len(y) != len(x):
        raise AlignmentError(f"{len(x)} feature rows but {len(y)} labels")
    l2 = [0.0] * len(params) if l2_per_layer is None else list(l2_per_layer)
    n = len(x)
    acts, z = _forward_pass(params, x)
    raw = _sigmoid(z)
    yhat = np.clip(raw, PROB_EPS, 1.0 - PROB_EPS)
    inside = (raw > PROB_EPS) & (raw < 1.0 - PROB_EPS)
    # log-probabilities from the logit; 1 - yhat loses digits once the sigmoid saturates
    log_p = np.where(inside, -np.logaddexp(0.0, -z), np.log(yhat))
    log_q = np.where(inside, -np.logaddexp(0.0, z), np.log1p(-yhat))
    loss = -np.mean(y * log_p + (1.0 - y) * log_q)
    loss += sum(lam * float(np.sum(w * w)) for lam, (w, _) in zip(l2, params))

    # d/dz of the cross-entropy through the sigmoid
    delta = np.where(inside, (yhat - y) / n, 0.0)[:, None]
    grads: Params = [None] * len(params)
    for layer in range(len(params) - 1, -1, -1):
        w, _ = params[layer]
        gw = acts[layer].T @ delta + 2.0 * l2[layer] * w
        gb = delta.sum(axis=0)
        grads[layer] = (gw, gb)
        if layer > 0:
            delta = (delta @ w.T) * (acts[layer] > 0)
    return float(loss), grads


def flatten(params: Params) -> np.ndarray:
    return np.concatenate([np.concatenate([w.ravel(), b.ravel()]) for w, b in params])


def unflatten(vec: np.ndarray, layer_sizes: Sequence[int]) -> Params:
    expected = sum(a * b + b for a, b in zip(layer_sizes[:-1], layer_sizes[1:]))
    if len(vec) != expected:
        raise DomainError(f"parameter vector has {len(vec)} entries, expected {expected}")
    params, pos = [], 0
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        w = vec[pos : pos + fan_in * fan_out].reshape(fan_in, fan_out)
        pos += fan_in * fan_out
        b = vec[pos : pos + fan_out]
        pos += fan_out
        params.append((w.copy(), b.copy()))
    return params


@dataclass
class _Adam:
    lr: float
    beta1: float
    beta2: float
    eps: float
    t: int = 0
    m: list = field(default_factory=list)
    v: list = field(default_factory=list)

    def step(self, params: Params, grads: Params) -> Params:
        flat_p = [a for pair in params for a in pair]
        flat_g = [a for pair in grads for a in pair]
        if not self.m:
            self.m = [np.zeros_like(a) for a in flat_p]
            self.v = [np.zeros_like(a) for a in flat_p]
        self.t += 1
        c1 = 1.0 - self.beta1**self.t
        c2 = 1.0 - self.beta2**self.t
        out = []
        for i, (p, g) in enumerate(zip(flat_p, flat_g)):
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g
            out.append(p - self.lr * (self.m[i] / c1) / (np.sqrt(self.v[i] / c2) + self.eps))
        return [(out[i], out[i + 1]) for i in range(0, len(out), 2)]


@dataclass(frozen=True)
class TrainingRun:
    snapshots: tuple[EpochSnapshot, ...]
    losses: tuple[float, ...]
    params: Params


def train_with_snapshots(
    x_train,
    y_train,
    x_valid,
    mlp: MlpConfig,
    train_cfg: TrainConfig = TrainConfig(),
    x_test=None,
) -> TrainingRun:
    """Train for ``train_cfg.epochs`` epochs, recording probabilities after each.

    Mini-batches follow a seeded shuffle that is redrawn every epoch; the last
    short batch is kept.  Identical seeds give bitwise identical runs.
    """
    width = mlp.layer_sizes[0]
    x_train = _as_features(x_train, width)
    x_valid = _as_features(x_valid, width)
    x_test = None if x_test is None else _as_features(x_test, width)
    y_train = as_binary(y_train, "y_train")
    if len(y_train) != len(x_train):
        raise AlignmentError(f"{len(x_train)} training rows but {len(y_train)} labels")
    if len(np.unique(y_train)) < 2:
        raise DegenerateDataError("training labels contain a single class")
    y_f = y_train.astype(np.float64)

    params = init_params(mlp)
    adam = _Adam(train_cfg.learning_rate, train_cfg.beta1, train_cfg.beta2, train_cfg.adam_eps)
    rng = np.random.default_rng(train_cfg.shuffle_seed)
    n, bs = len(x_train), train_cfg.batch_size
    snapshots, losses = [], []
    for epoch in range(1, train_cfg.epochs + 1):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, bs):
            idx = order[start : start + bs]
            # overflow is reported as DivergenceError below, not as a warning
            with np.errstate(over="ignore", invalid="ignore"):
                loss, grads = loss_and_gradient(params, x_train[idx], y_f[idx], mlp.l2_per_layer)
            if not math.isfinite(loss):
                raise DivergenceError(epoch)
            total += loss * len(idx)
            with np.errstate(over="ignore", invalid="ignore"):
                params = adam.step(params, grads)
        if not all(np.all(np.isfinite(w)) and np.all(np.isfinite(b)) for w, b in params):
            raise DivergenceError(epoch)
        losses.append(total / n)
        snapshots.append(
            EpochSnapshot(
                epoch,
                forward(params, x_train),
                forward(params, x_valid),
                None if x_test is None else forward(params, x_test),
            )
        )
    return TrainingRun(tuple(snapshots), tuple(losses), params)


def save_model(fh, params: Params, cfg: MlpConfig, standardization: dict | None = None) -> None:
    json.dump(
        {
            "format_version": MODEL_FORMAT_VERSION,
            "layer_sizes": list(cfg.layer_sizes),
            "l2_per_layer": list(cfg.l2_per_layer),
            "seed": cfg.seed,
            "params": [float(v) for v in flatten(params)],
            "standardization": standardization,
        },
        fh,
    )


def load_model(fh) -> tuple[Params, MlpConfig, dict | None]:
    doc = json.load(fh)
    if doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise ParseError(f"unsupported model format version {doc.get('format_version')!r}")
    cfg = MlpConfig(tuple(doc["layer_sizes"]), tuple(doc["l2_per_layer"]), doc.get("seed", 0))
    params = unflatten(np.array(doc["params"], dtype=np.float64), cfg.layer_sizes)
    return params, cfg, doc.get("standardization")
