class HeatkitError(Exception):
    """Base class for every error raised by heatkit."""


class DomainError(HeatkitError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class RefusalError(DomainError):
    """Series evaluation refused because t is below the policy floor."""

    def __init__(self, t, t_floor):
        self.t = t
        self.t_floor = t_floor
        super().__init__(
            f"t={t} is below the series floor {t_floor}; use the theta closed form "
            f"(alpha, beta in {{-1/2, 1/2}}), the odd-sphere route, or the reduction oracle"
        )


class AccuracyError(HeatkitError, RuntimeError):
    """A series or quadrature did not reach the requested accuracy."""


class CapacityError(HeatkitError, RuntimeError):
    """A combinatorial table was requested beyond its supported size."""


class ConfigurationError(HeatkitError, ValueError):
    """Inconsistent configuration, flag value or constant variant."""
