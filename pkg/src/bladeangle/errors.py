"""Exception hierarchy shared by the algebra, oracle and CLI layers."""


class BladeAngleError(Exception):
    """Base class for all library errors."""

    #: process exit status used by the CLI when this error escapes a command
    exit_code = 5


class DimensionMismatch(BladeAngleError, ValueError):
    exit_code = 2


class DegenerateSpan(BladeAngleError, ValueError):
    """Spanning vectors are linearly dependent (or zero)."""

    exit_code = 3


class RankDeficient(DegenerateSpan):
    """Oracle-side flavour of :class:`DegenerateSpan`."""


class ZeroBlade(BladeAngleError, ValueError):
    exit_code = 3


class GradeMismatch(BladeAngleError, ValueError):
    exit_code = 4


class NumericalFailure(BladeAngleError, ArithmeticError):
    """An iterative method hit its iteration cap."""

    exit_code = 5


class SplitFailure(NumericalFailure):
    """Bivector split did not reconstruct its input."""
