"""Binary series, probability series and the 2x2 confusion matrix.

Series are plain one-dimensional numpy arrays, validated on entry and
returned read-only so they can be shared freely.  Index 0 is the earliest
time step; ``y[i]`` precedes ``y[i + 1]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import AlignmentError, DomainError

ArrayLike = Union[Sequence[float], np.ndarray]


class Mode(str, enum.Enum):
    QUALITY = "quality"
    VALUE_WEIGHTED = "value_weighted"


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_binary(values: ArrayLike, name: str = "series") -> np.ndarray:
    """Validate a 0/1 vector and return it as a read-only ``int8`` array."""
    a = np.asarray(values)
    if a.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional, got shape {a.shape}")
    if a.size == 0:
        raise DomainError(f"{name} is empty")
    if a.dtype == bool:
        return _readonly(a.astype(np.int8))
    if not np.all((a == 0) | (a == 1)):
        bad = int(np.flatnonzero((a != 0) & (a != 1))[0])
        raise DomainError(f"{name} must contain only 0/1, found {a[bad]!r} at index {bad}")
    return _readonly(a.astype(np.int8))


def as_probabilities(values: ArrayLike, name: str = "probabilities") -> np.ndarray:
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 1:
        raise DomainError(f"{name} must be one-dimensional, got shape {a.shape}")
    if a.size == 0:
        raise DomainError(f"{name} is empty")
    if not np.all((a >= 0.0) & (a <= 1.0)):
        raise DomainError(f"{name} must lie in [0, 1]")
    return _readonly(a.copy())


def check_aligned(a: np.ndarray, b: np.ndarray, names: tuple[str, str] = ("y", "p")) -> None:
    if len(a) != len(b):
        raise AlignmentError(f"{names[0]} has length {len(a)} but {names[1]} has length {len(b)}")


@dataclass(frozen=True)
class ConfusionMatrix:
    """TP/FP/FN/TN tallies.

    In quality mode the entries are counts.  In value-weighted mode ``fp``
    and ``fn`` are sums of per-error weights while ``tp`` and ``tn`` remain
    counts.  Entries are floats in both modes so every skill score accepts
    either kind.
    """

    tp: float
    fp: float
    fn: float
    tn: float
    mode: Mode = Mode.QUALITY

    def __post_init__(self):
        for name in ("tp", "fp", "fn", "tn"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0:
                raise DomainError(f"confusion matrix entry {name}={v!r} must be finite and >= 0")
            if self.mode is Mode.QUALITY and v != int(v):
                raise DomainError(f"quality-mode entry {name}={v!r} is not an integer")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "mode", Mode(self.mode))

    @property
    def total(self) -> float:
        return self.tp + self.fp + self.fn + self.tn

    def as_array(self) -> np.ndarray:
        """Matrix layout ``[[TP, FP], [FN, TN]]``."""
        return np.array([[self.tp, self.fp], [self.fn, self.tn]])

    def swapped(self) -> ConfusionMatrix:
        """Matrix obtained by exchanging the roles of classes 0 and 1."""
        return ConfusionMatrix(self.tn, self.fn, self.fp, self.tp, self.mode)

    def scaled(self, c: float) -> ConfusionMatrix:
        return ConfusionMatrix(c * self.tp, c * self.fp, c * self.fn, c * self.tn, Mode.VALUE_WEIGHTED)

    def to_dict(self) -> dict:
        return {"mode": self.mode.value, "tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn}


def confusion_matrix(y: ArrayLike, p: ArrayLike) -> ConfusionMatrix:
    """Quality-based confusion matrix of prediction ``p`` against labels ``y``."""
    y = as_binary(y, "y")
    p = as_binary(p, "p")
    check_aligned(y, p)
    tp = int(np.count_nonzero((y == 1) & (p == 1)))
    fp = int(np.count_nonzero((y == 0) & (p == 1)))
    fn = int(np.count_nonzero((y == 1) & (p == 0)))
    tn = len(y) - tp - fp - fn
    return ConfusionMatrix(tp, fp, fn, tn, Mode.QUALITY)


def apply_threshold(probs: ArrayLike, tau: float) -> np.ndarray:
    """Binarize: element ``i`` is 1 iff ``probs[i] > tau`` (strict)."""
    if not 0.0 <= tau <= 1.0:
        raise DomainError(f"threshold {tau!r} outside [0, 1]")
    probs = as_probabilities(probs)
    return _readonly((probs > tau).astype(np.int8))
