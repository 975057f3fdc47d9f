"""Exception types raised across the package."""


class ShortedError(Exception):
    """Base class for all errors raised by :mod:`shorted`."""


class InvalidInput(ShortedError, ValueError):
    """Malformed, non-finite or dimensionally inconsistent input."""


class RangeInclusionFailed(ShortedError):
    """``R(C) ⊆ R(D)`` does not hold, so ``C = DZ`` has no solution."""

    def __init__(self, residual, message=None):
        self.residual = float(residual)
        super().__init__(message or f"range inclusion failed (residual {self.residual:.3e})")


class NotComplementable(ShortedError):
    """The operator is not complementable relative to the given subspaces."""

    def __init__(self, message="operator is not complementable", report=None):
        self.report = report
        super().__init__(message)


class IllPosedSchur(ShortedError):
    """``R(C) ⊆ R(D)`` holds but ``N(D) ⊄ N(B)``: the Schur complement is not unique."""

    def __init__(self, message="Schur complement is ill-posed: N(D) is not contained in N(B)", report=None):
        self.report = report
        super().__init__(message)


class HypothesisFailed(ShortedError):
    """A range hypothesis required by a closed-form formula does not hold."""

    def __init__(self, which, defect):
        self.which = which
        self.defect = float(defect)
        super().__init__(f"hypothesis {which} failed (defect {self.defect:.3e})")
