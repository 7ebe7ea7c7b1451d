"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class IntegrationError(RuntimeError):
    """The adaptive ODE integration could not reach its end time."""

    def __init__(self, message, t_reached):
        super().__init__(f"{message} (reached t={t_reached!r})")
        self.t_reached = t_reached


class UndefinedPhaseError(ArithmeticError):
    """The squeeze phase is undefined because the state is not squeezed."""


class GridError(RuntimeError):
    """A quadrature grid cannot represent the requested states accurately."""


class InfeasibleTargetError(ValueError):
    """An inverse-design target cannot be reached by the protocol family."""

    def __init__(self, message, attainable_max):
        super().__init__(f"{message} (attainable maximum {attainable_max!r})")
        self.attainable_max = attainable_max


class DegenerateSearchError(ValueError):
    """The objective is flat, so the requested extremum does not exist."""
