"""Choosing the binarization threshold that maximizes a skill score.

``S(F_y(probs > tau))`` is piecewise constant in ``tau``: it can only change
when ``tau`` crosses one of the distinct probability values.  The search
therefore evaluates the interval end points plus one representative
(the midpoint) of every gap between consecutive distinct probabilities,
which reaches every binarization achievable inside ``[lo, hi]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ArrayLike, ConfusionMatrix, Mode, as_binary, as_probabilities, check_aligned
from .errors import DomainError, NoFeasibleThresholdError, UndefinedScoreError
from .scores import Criterion, score
from .weights import phi_all, psi_all


@dataclass(frozen=True)
class ThresholdSearch:
    lo: float = 0.0
    hi: float = 1.0
    criterion: Criterion = field(default_factory=Criterion)

    def __post_init__(self):
        if not (0.0 <= self.lo < self.hi <= 1.0):
            raise DomainError(f"threshold interval [{self.lo}, {self.hi}] must satisfy 0 <= lo < hi <= 1")


@dataclass(frozen=True)
class ThresholdResult:
    tau_star: float
    best_score: float
    candidates_evaluated: int


def candidate_thresholds(probs: ArrayLike, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """Sorted candidate thresholds covering every achievable binarization in ``[lo, hi]``."""
    u = np.unique(as_probabilities(probs))
    mids = u[:-1] + (u[1:] - u[:-1]) / 2.0
    # guard against rounding up onto the upper value for adjacent floats
    mids = np.where(mids < u[1:], mids, u[:-1])
    cands = np.concatenate(([lo, hi], np.clip(mids, lo, hi)))
    return np.unique(cands)


def _matrices(probs: np.ndarray, y: np.ndarray, taus: np.ndarray, criterion: Criterion) -> list[ConfusionMatrix]:
    if criterion.mode is Mode.QUALITY:
        pos = np.sort(probs[y == 1])
        neg = np.sort(probs[y == 0])
        tp = len(pos) - np.searchsorted(pos, taus, side="right")
        fp = len(neg) - np.searchsorted(neg, taus, side="right")
        return [
            ConfusionMatrix(int(a), int(b), len(pos) - int(a), len(neg) - int(b), Mode.QUALITY)
            for a, b in zip(tp, fp)
        ]
    # psi only depends on the labels, so it is shared by all candidates
    psi_vec = psi_all(y, criterion.window)
    out = []
    for tau in taus:
        p = (probs > tau).astype(np.int8)
        fp_mask = (y == 0) & (p == 1)
        fn_mask = (y == 1) & (p == 0)
        tp = int(np.count_nonzero((y == 1) & (p == 1)))
        tn = len(y) - tp - int(np.count_nonzero(fp_mask)) - int(np.count_nonzero(fn_mask))
        wfp = math.fsum(psi_vec[fp_mask])
        wfn = math.fsum(phi_all(p, criterion.window)[fn_mask]) if fn_mask.any() else 0.0
        out.append(ConfusionMatrix(tp, wfp, wfn, tn, Mode.VALUE_WEIGHTED))
    return out


def score_curve(probs: ArrayLike, y: ArrayLike, search: ThresholdSearch = ThresholdSearch()) -> list[tuple[float, float | None]]:
    """``(tau, score)`` for every candidate threshold, ascending in ``tau``.

    Candidates whose score is undefined carry ``None``.
    """
    probs = as_probabilities(probs)
    y = as_binary(y, "y")
    check_aligned(y, probs, ("y", "probs"))
    taus = candidate_thresholds(probs, search.lo, search.hi)
    curve = []
    for tau, m in zip(taus, _matrices(probs, y, taus, search.criterion)):
        try:
            s = score(search.criterion.kind, m)
        except UndefinedScoreError:
            s = None
        curve.append((float(tau), s))
    return curve


def optimize_threshold(probs: ArrayLike, y: ArrayLike, search: ThresholdSearch = ThresholdSearch()) -> ThresholdResult:
    """Threshold in ``[lo, hi]`` maximizing the search criterion; ties go to the smallest."""
    curve = score_curve(probs, y, search)
    best_tau, best = None, None
    for tau, s in curve:
        if s is not None and (best is None or s > best):
            best_tau, best = tau, s
    if best is None:
        raise NoFeasibleThresholdError(
            f"{search.criterion.name} is undefined for every threshold in [{search.lo}, {search.hi}]"
        )
    return ThresholdResult(best_tau, best, len(curve))
