"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the physical domain of an operation."""


class ModeError(ValueError):
    """An operation was requested in a beam mode that cannot support it."""


class ConfigError(ValueError):
    """Invalid run configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class QuadratureError(RuntimeError):
    """A quadrature failed to reach the requested tolerance.

    ``achieved_tolerance`` carries the best error estimate obtained.
    """

    def __init__(self, message: str, achieved_tolerance: float):
        self.achieved_tolerance = achieved_tolerance
        super().__init__(f"{message} (achieved tolerance {achieved_tolerance:.3e})")
