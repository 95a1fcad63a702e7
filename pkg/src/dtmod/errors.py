"""Exception types shared across the package.

The CLI maps these onto exit codes: usage/configuration problems exit with 2,
violated mathematical preconditions (inadmissible weights, smoothness deficits,
empty evaluation domains) exit with 3, and failed verification invariants exit
with 1.
"""

from __future__ import annotations


class DtmodError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(DtmodError):
    """Bad configuration file, unknown key, or out-of-range setting."""


class HypothesisViolationError(DtmodError):
    """A mathematical precondition of the requested computation fails.

    The message names the violated condition; ``condition`` carries a short
    machine-readable tag.
    """

    def __init__(self, message: str, condition: str = ""):
        super().__init__(message)
        self.condition = condition or message


class InadmissibleWeightError(HypothesisViolationError):
    """Weight exponents fall outside the admissible range for the norm index."""


class SmoothnessError(HypothesisViolationError):
    """The function lacks the derivative order a computation needs."""


class NonConvergenceError(DtmodError):
    """An iterative computation stopped short of its tolerance.

    ``gap`` holds the final bracket width or residual that failed the check.
    """

    def __init__(self, message: str, gap: float = float("nan")):
        super().__init__(message)
        self.gap = gap


class InfeasibleConstraintError(DtmodError):
    """A constrained fit has no feasible candidate; carries sample points."""

    def __init__(self, message: str, where=None):
        super().__init__(message)
        self.where = list(where) if where is not None else []
