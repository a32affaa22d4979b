"""Exception hierarchy shared by all modules."""


class IwasawaError(Exception):
    """Base class for all library-specific failures."""


class DimensionMismatch(IwasawaError):
    """Operands have incompatible shapes."""


class NotSquare(IwasawaError):
    """A square matrix was required."""


class NotHermitian(IwasawaError):
    """Input fails the Hermitian tolerance check."""


class ConvergenceFailure(IwasawaError):
    """An iterative solver did not meet its residual contract."""


class Singular(IwasawaError):
    """Matrix is numerically singular (pivot below threshold)."""


class NotPositive(IwasawaError):
    """Input is not Hermitian positive definite."""


class FrameMismatch(IwasawaError):
    """Matrix dimensions do not match the spectral frame."""


class BadDimension(IwasawaError):
    """Dimension violates a family constraint."""


class ConstraintViolation(IwasawaError):
    """Coefficient sign/distinctness rule violated."""


class SingularCompression(IwasawaError):
    """A rank compression is not invertible."""
