"""Exception hierarchy shared by all modules."""


class StaError(Exception):
    """Base class for every error raised by this package."""


class DomainError(StaError, ValueError):
    """A time or angle lies outside the window where a quantity is defined."""


class ValidationError(StaError, ValueError):
    """Malformed input: wrong shape, non-Hermitian matrix, bad parameters."""


class DegeneracyError(StaError, ArithmeticError):
    """Two consecutive eigenvalues are closer than the allowed gap."""


class BoundaryError(DomainError):
    """A finite-difference stencil reaches outside the protocol window."""


class NumericError(StaError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance.

    ``estimate`` and ``error_bound`` carry the best result achieved so the
    caller can decide whether it is still usable.
    """

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class StepSizeError(NumericError):
    """Propagation lost norm beyond the allowed drift; use more steps."""


class TruncationWarning(UserWarning):
    """A truncated basis is visibly too small for the requested state."""
