"""Exception hierarchy for the poissonk package."""


class PoissonKError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(PoissonKError, ValueError):
    """A parameter violates its validity invariants (e.g. lambda < 0)."""


class KernelOverflowError(PoissonKError, OverflowError):
    """A linear-space table value left the representable double range.

    Callers should retry in log space.
    """


class EnumerationBudgetError(PoissonKError):
    """Exact composition enumeration exceeded its term budget."""


class WindowTooSmallError(PoissonKError, ValueError):
    """A table is too short for the requested structural analysis."""


class TailDominationError(PoissonKError):
    """The pmf at the mode search-window edge is not strictly decreasing.

    Signals a window sizing bug, not a mathematical fact.
    """


class StructuralAnomalyError(PoissonKError):
    """The mountain range shows more than two peaks.

    Must never be silently clamped: it would falsify the observed
    two-peak maximum and would be a publishable finding.
    """


class BracketViolationError(PoissonKError):
    """A root bracket that is guaranteed by proved bounds failed to hold."""


class NoSignChangeError(PoissonKError, ValueError):
    """The supplied bracket does not straddle a sign change."""


class CountMismatchError(PoissonKError):
    """Number of detected mode jumps disagrees with the regime prediction."""


class RefinementBudgetError(PoissonKError):
    """Adaptive bisection of a mode-jump interval exceeded its iteration cap."""
