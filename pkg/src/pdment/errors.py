"""Exception types raised across the package."""


class PdmentError(Exception):
    """Base class for all package errors."""


class NonFiniteIntegrand(PdmentError, ArithmeticError):
    def __init__(self, x):
        self.x = x
        super().__init__(f"integrand is not finite at x={x!r}")


class UnsupportedOrder(PdmentError, ValueError):
    pass


class UnsupportedElement(PdmentError, ValueError):
    pass


class InvalidParams(PdmentError, ValueError):
    pass


class DerivativeUnavailable(PdmentError):
    pass


class SingularMass(PdmentError, ValueError):
    pass


class NoConvergence(PdmentError, RuntimeError):
    pass


class GridMismatch(PdmentError, ValueError):
    pass


class IOFailure(PdmentError, OSError):
    pass


class NotConvergedWarning(UserWarning):
    """Quadrature hit its refinement limit before meeting tolerance."""
