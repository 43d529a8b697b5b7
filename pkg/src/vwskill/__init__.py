"""Value-weighted skill scores and epoch-ensemble classification for binary time series."""

from .core import ConfusionMatrix, Mode, apply_threshold, confusion_matrix
from .ensemble import EnsembleClassifier, EpochSnapshot, QualityLevel, build_ensemble, median_vote
from .scores import Criterion, ScoreKind, acc, csi, dual_report, hss, score, tss
from .thresholding import ThresholdSearch, optimize_threshold, score_curve
from .weights import WindowConfig, phi, psi, weighted_confusion_matrix

__version__ = "0.1.0"

__all__ = [
    "ConfusionMatrix",
    "Criterion",
    "EnsembleClassifier",
    "EpochSnapshot",
    "Mode",
    "QualityLevel",
    "ScoreKind",
    "ThresholdSearch",
    "WindowConfig",
    "acc",
    "apply_threshold",
    "build_ensemble",
    "confusion_matrix",
    "csi",
    "dual_report",
    "hss",
    "median_vote",
    "optimize_threshold",
    "phi",
    "psi",
    "score",
    "score_curve",
    "tss",
    "weighted_confusion_matrix",
]
