"""Exception types shared across the package."""


class QsdError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(QsdError, ValueError):
    """Input is outside the mathematical domain of an operation."""


class DimensionMismatchError(DomainError):
    """Operands live in spaces of different dimension."""


class FormatError(QsdError, ValueError):
    """A serialized object does not conform to its file format."""


class EigendecompositionError(QsdError):
    """Eigensolver failed to converge.

    Carries the Frobenius mass of the off-diagonal part of the input as a
    diagnostic for how far from diagonal the matrix was.
    """

    def __init__(self, message: str, offdiag_residual: float):
        super().__init__(f"{message} (off-diagonal residual {offdiag_residual:.3e})")
        self.offdiag_residual = offdiag_residual
