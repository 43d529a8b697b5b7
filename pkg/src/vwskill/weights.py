"""Temporal weighting of false positives and false negatives.

A false alarm raised shortly *before* an event is a useful warning and is
charged less than one; an alarm with no event anywhere nearby costs double.
Symmetrically, a missed event that was preceded by an alarm is charged less
than one, and a miss with no alarm nearby costs double.

For a window half-size ``K`` and a false positive at index ``i``::

    psi = 2                                   if y[i-K : i+K+1] holds no event
    psi = 1 - max_{1<=k<=K} y[i+k] / (k + 1)  otherwise

and for a false negative at ``i``::

    phi = 2                                   if p[i-K : i+K+1] holds no alarm
    phi = 1 - max_{1<=k<=K} p[i-k] / (k + 1)  otherwise

Indices falling outside the series are treated as absent, so windows are
clipped at both ends.  Every weight lies in ``[1/2, 1]`` or equals 2.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .core import ArrayLike, ConfusionMatrix, Mode, as_binary, check_aligned
from .errors import DomainError

DEFAULT_K = 3
ISOLATED_WEIGHT = 2.0


@dataclass(frozen=True)
class WindowConfig:
    k: int = DEFAULT_K

    def __post_init__(self):
        if isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
            raise DomainError(f"window half-size must be a positive integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))


def _as_window(window: WindowConfig | int) -> WindowConfig:
    return window if isinstance(window, WindowConfig) else WindowConfig(window)


def _check_index(i: int, n: int) -> None:
    if not 0 <= i < n:
        raise DomainError(f"index {i} outside [0, {n - 1}]")


def psi(y: ArrayLike, i: int, window: WindowConfig | int = DEFAULT_K) -> float:
    """Weight of a false positive at index ``i`` (0-based) given labels ``y``."""
    y = as_binary(y, "y")
    k = _as_window(window).k
    n = len(y)
    _check_index(i, n)
    if not any(y[j] == 1 for j in range(max(0, i - k), min(n, i + k + 1))):
        return ISOLATED_WEIGHT
    best = 0.0
    for step in range(1, k + 1):
        if i + step < n:
            best = max(best, y[i + step] / (step + 1))
    return 1.0 - best


def phi(p: ArrayLike, i: int, window: WindowConfig | int = DEFAULT_K) -> float:
    """Weight of a false negative at index ``i`` (0-based) given predictions ``p``."""
    p = as_binary(p, "p")
    k = _as_window(window).k
    n = len(p)
    _check_index(i, n)
    if not any(p[j] == 1 for j in range(max(0, i - k), min(n, i + k + 1))):
        return ISOLATED_WEIGHT
    best = 0.0
    for step in range(1, k + 1):
        if i - step >= 0:
            best = max(best, p[i - step] / (step + 1))
    return 1.0 - best


def _any_in_window(x: np.ndarray, k: int) -> np.ndarray:
    """``out[i]`` is True iff ``x`` has a 1 in ``[i-k, i+k]`` clipped to the series."""
    c = np.concatenate(([0], np.cumsum(x, dtype=np.int64)))
    idx = np.arange(len(x))
    lo = np.maximum(idx - k, 0)
    hi = np.minimum(idx + k + 1, len(x))
    return (c[hi] - c[lo]) > 0


def _nearest_bonus(x: np.ndarray, k: int, direction: int) -> np.ndarray:
    """``max_{1<=s<=k} x[i + direction*s] / (s + 1)`` for every ``i``; 0 off the ends."""
    n = len(x)
    best = np.zeros(n)
    # largest reward is for the closest step, so walk outward and keep the first hit
    for step in range(k, 0, -1):
        shifted = np.zeros(n)
        if step < n:
            if direction > 0:
                shifted[: n - step] = x[step:]
            else:
                shifted[step:] = x[: n - step]
        best = np.where(shifted == 1, 1.0 / (step + 1), best)
    return best


def psi_all(y: ArrayLike, window: WindowConfig | int = DEFAULT_K) -> np.ndarray:
    """``psi(y, i)`` evaluated at every index at once."""
    y = as_binary(y, "y")
    k = _as_window(window).k
    return np.where(_any_in_window(y, k), 1.0 - _nearest_bonus(y, k, +1), ISOLATED_WEIGHT)


def phi_all(p: ArrayLike, window: WindowConfig | int = DEFAULT_K) -> np.ndarray:
    """``phi(p, i)`` evaluated at every index at once."""
    p = as_binary(p, "p")
    k = _as_window(window).k
    return np.where(_any_in_window(p, k), 1.0 - _nearest_bonus(p, k, -1), ISOLATED_WEIGHT)


@dataclass(frozen=True)
class WeightReport:
    """Per-error weights behind a value-weighted matrix (0-based indices)."""

    fp_weights: tuple[tuple[int, float], ...] = field(default_factory=tuple)
    fn_weights: tuple[tuple[int, float], ...] = field(default_factory=tuple)

    def rows(self) -> Iterator[tuple[int, str, float]]:
        merged = [(i, "FP", w) for i, w in self.fp_weights] + [(i, "FN", w) for i, w in self.fn_weights]
        yield from sorted(merged)

    def write_csv(self, fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "kind", "weight"])
        for i, kind, w in self.rows():
            writer.writerow([i, kind, repr(w)])


def weighted_confusion_matrix(
    y: ArrayLike, p: ArrayLike, window: WindowConfig | int = DEFAULT_K
) -> tuple[ConfusionMatrix, WeightReport]:
    """Value-weighted confusion matrix of ``p`` against ``y``.

    TP and TN are plain counts; FP and FN are sums of ``psi`` and ``phi``
    over the false positives and false negatives respectively.
    """
    y = as_binary(y, "y")
    p = as_binary(p, "p")
    check_aligned(y, p)
    window = _as_window(window)
    fp_idx = np.flatnonzero((y == 0) & (p == 1))
    fn_idx = np.flatnonzero((y == 1) & (p == 0))
    fp_w = psi_all(y, window)[fp_idx]
    fn_w = phi_all(p, window)[fn_idx]
    tp = int(np.count_nonzero((y == 1) & (p == 1)))
    tn = len(y) - tp - len(fp_idx) - len(fn_idx)
    m = ConfusionMatrix(tp, math.fsum(fp_w), math.fsum(fn_w), tn, Mode.VALUE_WEIGHTED)
    report = WeightReport(
        tuple(zip(fp_idx.tolist(), fp_w.tolist())),
        tuple(zip(fn_idx.tolist(), fn_w.tolist())),
    )
    return m, report
