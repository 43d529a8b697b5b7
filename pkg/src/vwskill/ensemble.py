"""Ensembles of training epochs selected by a skill score.

Procedure, given per-epoch probability outputs of one network:

1. for every epoch pick the threshold maximizing the score on the
   training set (:func:`calibrate_epochs`);
2. score each epoch on the validation set with that frozen threshold and
   keep the epochs strictly above a quality level (:func:`select_epochs`);
3. classify a new sample by the median of the kept epochs' binary votes,
   an exact tie counting as 1 (:func:`median_vote`).
"""

from __future__ import annotations

import csv
import enum
import logging
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import ArrayLike, as_binary, as_probabilities, check_aligned
from .errors import (
    AlignmentError,
    DomainError,
    EmptyEnsembleError,
    NoFeasibleThresholdError,
    ParseError,
    UndefinedScoreError,
)
from .scores import Criterion, DualReport, dual_report
from .thresholding import ThresholdSearch, optimize_threshold
from .weights import DEFAULT_K, WindowConfig

log = logging.getLogger(__name__)

SPLITS = ("train", "valid", "test")


@dataclass(frozen=True)
class EpochSnapshot:
    """Network outputs after one training epoch.

    ``tau_star``/``train_score`` are filled in by calibration and
    ``valid_score`` by validation; ``tau_star`` stays ``None`` for an epoch
    whose training score was undefined at every threshold.
    """

    epoch: int
    train_probs: np.ndarray
    valid_probs: np.ndarray
    test_probs: np.ndarray | None = None
    tau_star: float | None = None
    train_score: float | None = None
    valid_score: float | None = None

    @property
    def selectable(self) -> bool:
        return self.tau_star is not None


class LevelKind(str, enum.Enum):
    ABSOLUTE = "absolute"
    RELATIVE = "relative"


@dataclass(frozen=True)
class QualityLevel:
    """Validation cutoff: a fixed ``alpha``, or a fraction of the best epoch's score."""

    kind: LevelKind
    value: float

    def __post_init__(self):
        object.__setattr__(self, "kind", LevelKind(self.kind))
        if not np.isfinite(self.value):
            raise DomainError("quality level must be finite")
        if self.kind is LevelKind.RELATIVE and not 0.0 < self.value <= 1.0:
            raise DomainError(f"relative quality rate must be in (0, 1], got {self.value}")

    @classmethod
    def absolute(cls, alpha: float) -> QualityLevel:
        return cls(LevelKind.ABSOLUTE, float(alpha))

    @classmethod
    def relative(cls, rate: float) -> QualityLevel:
        return cls(LevelKind.RELATIVE, float(rate))

    def cutoff(self, scores: Iterable[float]) -> float:
        if self.kind is LevelKind.ABSOLUTE:
            return self.value
        scores = list(scores)
        if not scores:
            raise EmptyEnsembleError(None, float("nan"))
        return self.value * max(scores)


@dataclass(frozen=True)
class EnsembleClassifier:
    selected: tuple[tuple[int, float], ...]
    criterion: Criterion

    def __post_init__(self):
        if not self.selected:
            raise EmptyEnsembleError(None, float("nan"))

    @property
    def epochs(self) -> tuple[int, ...]:
        return tuple(e for e, _ in self.selected)

    def votes(self, probs_per_epoch: Mapping[int, ArrayLike]) -> np.ndarray:
        """Binary votes, one row per selected epoch."""
        rows = []
        length = None
        for epoch, tau in self.selected:
            if epoch not in probs_per_epoch:
                raise DomainError(f"no probabilities supplied for selected epoch {epoch}")
            probs = as_probabilities(probs_per_epoch[epoch], f"epoch {epoch} probabilities")
            if length is not None and len(probs) != length:
                raise AlignmentError(f"epoch {epoch} has {len(probs)} samples, expected {length}")
            length = len(probs)
            rows.append(probs > tau)
        return np.array(rows, dtype=np.int8)

    def predict(self, probs_per_epoch: Mapping[int, ArrayLike]) -> np.ndarray:
        return median_vote(self.votes(probs_per_epoch))


def median_vote(votes: ArrayLike) -> np.ndarray:
    """Column-wise median of binary votes with an exact tie resolved to 1.

    For binary values the median is the majority, so the output is 1 iff at
    least half of the votes are 1.
    """
    v = np.asarray(votes)
    if v.ndim == 1:
        v = v[:, None]
    if v.shape[0] == 0:
        raise DomainError("no votes")
    ones = np.count_nonzero(v == 1, axis=0)
    out = (2 * ones >= v.shape[0]).astype(np.int8)
    out.setflags(write=False)
    return out


def calibrate_epochs(
    snapshots: Sequence[EpochSnapshot], y_train: ArrayLike, search: ThresholdSearch = ThresholdSearch()
) -> list[EpochSnapshot]:
    """Attach the training-optimal threshold and its score to every snapshot."""
    if not snapshots:
        raise DomainError("no epoch snapshots to calibrate")
    y_train = as_binary(y_train, "y_train")
    out = []
    for snap in snapshots:
        check_aligned(y_train, snap.train_probs, ("y_train", f"epoch {snap.epoch} train_probs"))
        try:
            res = optimize_threshold(snap.train_probs, y_train, search)
        except NoFeasibleThresholdError:
            log.warning("epoch %d has no feasible threshold; marked unselectable", snap.epoch)
            out.append(replace(snap, tau_star=None, train_score=None))
            continue
        out.append(replace(snap, tau_star=res.tau_star, train_score=res.best_score))
    return out


def validate_epochs(snapshots: Sequence[EpochSnapshot], y_valid: ArrayLike, criterion: Criterion) -> list[EpochSnapshot]:
    """Score every calibrated snapshot on the validation set with its frozen threshold."""
    y_valid = as_binary(y_valid, "y_valid")
    out = []
    for snap in snapshots:
        if not snap.selectable:
            out.append(replace(snap, valid_score=None))
            continue
        check_aligned(y_valid, snap.valid_probs, ("y_valid", f"epoch {snap.epoch} valid_probs"))
        p = (np.asarray(snap.valid_probs) > snap.tau_star).astype(np.int8)
        try:
            s = criterion(y_valid, p)
        except UndefinedScoreError:
            s = None
        out.append(replace(snap, valid_score=s))
    return out


def select_epochs(
    snapshots: Sequence[EpochSnapshot],
    y_valid: ArrayLike,
    level: QualityLevel,
    criterion: Criterion,
    fallback: bool = False,
) -> list[int]:
    """Epochs whose validation score is strictly above the quality level.

    With ``fallback=True`` an empty selection is replaced by the single epoch
    with the best validation score; otherwise :class:`EmptyEnsembleError` is
    raised carrying that best score.
    """
    scored = [s for s in validate_epochs(snapshots, y_valid, criterion) if s.valid_score is not None]
    if not scored:
        raise EmptyEnsembleError(None, level.value)
    cutoff = level.cutoff(s.valid_score for s in scored)
    chosen = [s.epoch for s in scored if s.valid_score > cutoff]
    if chosen:
        return chosen
    best = max(scored, key=lambda s: (s.valid_score, -s.epoch))
    if fallback:
        log.warning("empty ensemble at cutoff %.6g; falling back to epoch %d", cutoff, best.epoch)
        return [best.epoch]
    raise EmptyEnsembleError(best.valid_score, cutoff)


@dataclass(frozen=True)
class EnsembleFit:
    classifier: EnsembleClassifier
    snapshots: tuple[EpochSnapshot, ...]
    cutoff: float


def build_ensemble(
    snapshots: Sequence[EpochSnapshot],
    y_train: ArrayLike,
    y_valid: ArrayLike,
    level: QualityLevel,
    search: ThresholdSearch = ThresholdSearch(),
    fallback: bool = False,
) -> EnsembleFit:
    """Calibrate, validate and select in one call."""
    calibrated = calibrate_epochs(snapshots, y_train, search)
    validated = validate_epochs(calibrated, y_valid, search.criterion)
    chosen = set(select_epochs(calibrated, y_valid, level, search.criterion, fallback))
    scores = [s.valid_score for s in validated if s.valid_score is not None]
    clf = EnsembleClassifier(
        tuple((s.epoch, s.tau_star) for s in validated if s.epoch in chosen), search.criterion
    )
    return EnsembleFit(clf, tuple(validated), level.cutoff(scores))


def predict(clf: EnsembleClassifier, probs_per_epoch: Mapping[int, ArrayLike]) -> np.ndarray:
    return clf.predict(probs_per_epoch)


def evaluate(predictions: ArrayLike, y_test: ArrayLike, window: WindowConfig | int = DEFAULT_K) -> DualReport:
    """Quality and value-weighted evaluation of ensemble predictions."""
    return dual_report(y_test, predictions, window)


def write_snapshot_matrix(fh, split: str, probs_per_epoch: Mapping[int, ArrayLike]) -> None:
    """Write one split of per-epoch probabilities.

    Header: the split name followed by the sample positions; then one row per
    epoch, epoch index first.
    """
    if split not in SPLITS:
        raise DomainError(f"unknown split {split!r}")
    epochs = sorted(probs_per_epoch)
    if not epochs:
        raise DomainError("no epochs to write")
    width = len(probs_per_epoch[epochs[0]])
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow([split] + list(range(width)))
    for e in epochs:
        row = np.asarray(probs_per_epoch[e], dtype=np.float64)
        if len(row) != width:
            raise AlignmentError(f"epoch {e} has {len(row)} samples, expected {width}")
        writer.writerow([e] + [repr(float(v)) for v in row])


def read_snapshot_matrix(fh) -> tuple[str, dict[int, np.ndarray]]:
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty snapshot file") from None
    split = header[0].strip().lower()
    if split not in SPLITS:
        raise ParseError(f"first header cell must name the split {SPLITS}, got {header[0]!r}", row=1)
    width = len(header) - 1
    out: dict[int, np.ndarray] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != width + 1:
            raise ParseError(f"expected {width + 1} fields, got {len(row)}", row=lineno)
        try:
            epoch = int(row[0])
        except ValueError:
            raise ParseError(f"bad epoch index {row[0]!r}", row=lineno, column=header[0]) from None
        if epoch in out:
            raise ParseError(f"duplicate epoch {epoch}", row=lineno)
        vals = np.empty(width)
        for j, cell in enumerate(row[1:]):
            try:
                vals[j] = float(cell)
            except ValueError:
                raise ParseError(f"bad probability {cell!r}", row=lineno, column=header[j + 1]) from None
        try:
            out[epoch] = as_probabilities(vals, f"epoch {epoch}")
        except DomainError as exc:
            raise ParseError(str(exc), row=lineno) from None
    if not out:
        raise ParseError("snapshot file has no epoch rows")
    return split, out


def snapshots_from_matrices(
    train: Mapping[int, np.ndarray], valid: Mapping[int, np.ndarray], test: Mapping[int, np.ndarray] | None = None
) -> list[EpochSnapshot]:
    if set(train) != set(valid) or (test is not None and set(test) != set(train)):
        raise AlignmentError("snapshot files list different epochs")
    return [
        EpochSnapshot(e, train[e], valid[e], None if test is None else test[e])
        for e in sorted(train)
    ]
