"""Exception hierarchy shared by all modules."""


class MatrixlessError(Exception):
    """Base class for every error raised by this package."""


class NonMonotoneSymbol(MatrixlessError):
    """The symbol is not increasing on [0, pi], so it cannot be inverted."""


class ConvergenceFailure(MatrixlessError):
    """An iterative eigensolver exceeded its iteration cap."""


class SingularSystem(MatrixlessError):
    """The extrapolation system has repeated step sizes."""


class UnsupportedSymbol(MatrixlessError):
    """The requested operation is only defined for another symbol family."""


class InfeasibleReference(MatrixlessError):
    """A reference spectrum is too large to compute densely and none was supplied."""
