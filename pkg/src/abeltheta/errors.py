"""Exception types shared across the package."""


class AbelThetaError(Exception):
    """Base class for all errors raised by this package."""


class DivisibilityViolation(AbelThetaError):
    """Polarization type is not a divisor chain d_1 | d_2 | ... | d_n."""


class NotSymmetric(AbelThetaError):
    """A matrix required to be symmetric is not, beyond input tolerance."""


class NotPositiveDefinite(AbelThetaError):
    """A matrix required to be positive definite has a nonpositive eigenvalue."""


class EpsTooSmall(AbelThetaError):
    """The requested truncation accuracy cannot be certified within the radius cap."""


class PlanError(AbelThetaError):
    """A lattice-sum evaluation could not satisfy its truncation plan."""


class MissingParam(AbelThetaError):
    """A bundle or metric requires a parameter that was not supplied."""


class ParseError(AbelThetaError):
    """Configuration text could not be parsed."""


class ValidationError(AbelThetaError):
    """Configuration parsed but failed validation; carries the offending field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class UnknownCommand(AbelThetaError):
    """CLI dispatch received a command name outside the supported set."""
