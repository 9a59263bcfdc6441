"""Exception hierarchy shared by all modules."""


class GaussFrustError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(GaussFrustError, ValueError):
    """An argument violates a documented constraint."""


class ConvergenceError(GaussFrustError):
    """An iterative routine hit its iteration cap.

    The last residual (or the last estimates) is kept on ``residual``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SingularMatrixError(GaussFrustError, ValueError):
    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class NumericalInstabilityError(GaussFrustError):
    pass


class InvalidCovarianceMatrix(GaussFrustError, ValueError):
    pass


class GroupTooLargeError(GaussFrustError):
    pass


class NotSymmetricGraphError(GaussFrustError, ValueError):
    pass


class SwapHypothesisError(GaussFrustError, ValueError):
    """No group element exchanges the two designated modes."""


class NonAbelianCommutantError(GaussFrustError, ValueError):
    pass


class RouteMismatchError(GaussFrustError):
    """Two independent routes to the same quantity disagree."""
