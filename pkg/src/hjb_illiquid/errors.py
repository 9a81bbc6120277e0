"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A model or configuration parameter violates its constraints."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class LogDomainError(DomainError):
    """A logarithm was requested of a non-positive quantity (e.g. V_l <= 0)."""


class DegenerateHessianError(DomainError):
    """The second derivative in the wealth direction is not strictly negative."""


class SingularityError(DomainError):
    """Evaluation at a singular point (e.g. Weibull hazard at t=0 with k<1)."""


class ExtrapolationError(DomainError):
    """A query point falls outside the solved/tabulated domain."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to converge.

    Carries the residual history for diagnostics.
    """

    def __init__(self, message, residual_history=None):
        super().__init__(message)
        self.residual_history = list(residual_history or [])
