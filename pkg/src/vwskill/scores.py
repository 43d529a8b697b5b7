"""Skill scores on quality-based and value-weighted confusion matrices.

The value-weighted scores (wACC, wTSS, wHSS, wCSI) are the ordinary
formulas evaluated on a value-weighted matrix; there is no separate code
path for them.  A zero denominator raises :class:`UndefinedScoreError`
instead of returning 0 or NaN.
"""

from __future__ import annotations

import csv
import enum
import json
from dataclasses import dataclass, field

from .core import ArrayLike, ConfusionMatrix, Mode, as_binary, check_aligned, confusion_matrix
from .errors import DomainError, UndefinedScoreError
from .weights import DEFAULT_K, WeightReport, WindowConfig, weighted_confusion_matrix


class ScoreKind(str, enum.Enum):
    ACC = "acc"
    TSS = "tss"
    HSS = "hss"
    CSI = "csi"


def acc(m: ConfusionMatrix) -> float:
    total = m.total
    if total <= 0:
        raise UndefinedScoreError("ACC", "matrix is empty")
    return (m.tp + m.tn) / total


def tss(m: ConfusionMatrix) -> float:
    """True skill statistic: hit rate minus false alarm rate."""
    if m.tp + m.fn <= 0:
        raise UndefinedScoreError("TSS", "no positive observations")
    if m.fp + m.tn <= 0:
        raise UndefinedScoreError("TSS", "no negative observations")
    return m.tp / (m.tp + m.fn) - m.fp / (m.fp + m.tn)


def hss(m: ConfusionMatrix) -> float:
    """Heidke skill score, ``2(TP*TN - FN*FP) / (T1 + T2)``."""
    t1 = (m.tp + m.fn) * (m.fn + m.tn)
    t2 = (m.tp + m.fp) * (m.fp + m.tn)
    if t1 + t2 <= 0:
        raise UndefinedScoreError("HSS", "zero denominator")
    return 2.0 * (m.tp * m.tn - m.fn * m.fp) / (t1 + t2)


def csi(m: ConfusionMatrix) -> float:
    denom = m.tp + m.fp + m.fn
    if denom <= 0:
        raise UndefinedScoreError("CSI", "no events observed or forecast")
    return m.tp / denom


_SCORE_FUNCS = {ScoreKind.ACC: acc, ScoreKind.TSS: tss, ScoreKind.HSS: hss, ScoreKind.CSI: csi}


def score(kind: ScoreKind | str, m: ConfusionMatrix) -> float:
    return _SCORE_FUNCS[ScoreKind(kind)](m)


@dataclass(frozen=True)
class Criterion:
    """A skill score together with the matrix it is evaluated on.

    ``Criterion.parse("wtss")`` gives TSS on the value-weighted matrix,
    ``Criterion.parse("tss")`` TSS on the quality matrix.
    """

    kind: ScoreKind = ScoreKind.TSS
    mode: Mode = Mode.QUALITY
    window: WindowConfig = field(default_factory=WindowConfig)

    def __post_init__(self):
        object.__setattr__(self, "kind", ScoreKind(self.kind))
        object.__setattr__(self, "mode", Mode(self.mode))
        if not isinstance(self.window, WindowConfig):
            object.__setattr__(self, "window", WindowConfig(self.window))

    @classmethod
    def parse(cls, name: str, k: int = DEFAULT_K) -> Criterion:
        name = name.strip().lower()
        mode = Mode.QUALITY
        if name.startswith("w") and name[1:] in {s.value for s in ScoreKind}:
            mode, name = Mode.VALUE_WEIGHTED, name[1:]
        try:
            kind = ScoreKind(name)
        except ValueError:
            raise DomainError(f"unknown score {name!r}") from None
        return cls(kind, mode, WindowConfig(k))

    @property
    def name(self) -> str:
        prefix = "w" if self.mode is Mode.VALUE_WEIGHTED else ""
        return prefix + self.kind.value.upper()

    def matrix(self, y: ArrayLike, p: ArrayLike) -> ConfusionMatrix:
        if self.mode is Mode.VALUE_WEIGHTED:
            return weighted_confusion_matrix(y, p, self.window)[0]
        return confusion_matrix(y, p)

    def __call__(self, y: ArrayLike, p: ArrayLike) -> float:
        return score(self.kind, self.matrix(y, p))


@dataclass(frozen=True)
class DualReport:
    """Quality and value-weighted matrices of one prediction with all eight scores.

    A score whose denominator vanishes is stored as ``None`` and its reason
    kept in ``errors``.
    """

    quality: ConfusionMatrix
    weighted: ConfusionMatrix
    weight_report: WeightReport
    k: int
    scores: dict[str, float | None]
    errors: dict[str, str]

    def rows(self) -> list[dict]:
        out = []
        for mode, m in ((Mode.QUALITY, self.quality), (Mode.VALUE_WEIGHTED, self.weighted)):
            prefix = "w" if mode is Mode.VALUE_WEIGHTED else ""
            for kind in ScoreKind:
                name = prefix + kind.value.upper()
                out.append(
                    {
                        "score": name,
                        "mode": mode.value,
                        "value": self.scores[name],
                        "tp": m.tp,
                        "fp": m.fp,
                        "fn": m.fn,
                        "tn": m.tn,
                    }
                )
        return out

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "quality_matrix": self.quality.to_dict(),
            "weighted_matrix": self.weighted.to_dict(),
            "scores": dict(self.scores),
            "errors": dict(self.errors),
        }

    def write_json(self, fh) -> None:
        json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")

    def write_csv(self, fh) -> None:
        writer = csv.DictWriter(fh, ["score", "mode", "value", "tp", "fp", "fn", "tn"], lineterminator="\n")
        writer.writeheader()
        for row in self.rows():
            writer.writerow({k: ("" if v is None else (repr(v) if isinstance(v, float) else v)) for k, v in row.items()})


def dual_report(y: ArrayLike, p: ArrayLike, window: WindowConfig | int = DEFAULT_K) -> DualReport:
    y = as_binary(y, "y")
    p = as_binary(p, "p")
    check_aligned(y, p)
    window = window if isinstance(window, WindowConfig) else WindowConfig(window)
    quality = confusion_matrix(y, p)
    weighted, report = weighted_confusion_matrix(y, p, window)
    scores: dict[str, float | None] = {}
    errors: dict[str, str] = {}
    for prefix, m in (("", quality), ("w", weighted)):
        for kind in ScoreKind:
            name = prefix + kind.value.upper()
            try:
                scores[name] = score(kind, m)
            except UndefinedScoreError as exc:
                scores[name] = None
                errors[name] = exc.reason
    return DualReport(quality, weighted, report, window.k, scores, errors)
