"""Exception hierarchy shared by every module of the toolkit."""


class VWSkillError(Exception):
    """Base class for all toolkit errors."""


class AlignmentError(VWSkillError, ValueError):
    """Two series that must be index-aligned have different lengths."""


class DomainError(VWSkillError, ValueError):
    """An argument lies outside the domain of an operation."""


class UndefinedScoreError(VWSkillError, ArithmeticError):
    """A skill score has a zero denominator for the given matrix."""

    def __init__(self, score: str, reason: str):
        super().__init__(f"{score} is undefined: {reason}")
        self.score = score
        self.reason = reason


class NoFeasibleThresholdError(VWSkillError):
    """Every candidate threshold produced an undefined score."""


class EmptyEnsembleError(VWSkillError):
    """No epoch passed the validation quality level."""

    def __init__(self, best_score: float | None, threshold: float):
        msg = f"no epoch scored above the quality level {threshold:.6g}"
        if best_score is not None:
            msg += f"; best validation score was {best_score:.6g}"
        super().__init__(msg)
        self.best_score = best_score
        self.threshold = threshold


class DegenerateDataError(VWSkillError, ValueError):
    """Training labels contain a single class."""


class DivergenceError(VWSkillError, FloatingPointError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch: int):
        super().__init__(f"non-finite training loss at epoch {epoch}")
        self.epoch = epoch


class ParseError(VWSkillError, ValueError):
    """A data file could not be parsed; carries 1-based file coordinates."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.row = row
        self.column = column


class OrderingError(ParseError):
    """Timestamps are not strictly increasing."""


class SplitError(VWSkillError, ValueError):
    """A chronological split produced an empty segment."""

    def __init__(self, segment: str, message: str = ""):
        super().__init__(message or f"empty {segment} split")
        self.segment = segment
