"""
Exception hierarchy for skewmix.

Every error raised by the package derives from SkewMixError, which carries the
pipeline stage where it happened and a details dictionary that the cluster
runner serialises into report.json.
"""

from typing import Any


class SkewMixError(Exception):
    """
    Base exception for all skewmix errors.

    Args:
        message: Error message
        stage: Optional stage where the error occurred
        details: Optional additional error details
    """

    def __init__(
        self,
        message: str,
        stage: str | None = None,
        details: dict[str, Any] | None = None,
    ) -> None:
        self.stage = stage
        self.details = details or {}
        super().__init__(message)

    def __str__(self) -> str:
        """Return formatted error message."""
        if self.stage:
            return f"[{self.stage}] {super().__str__()}"
        return super().__str__()


class NumericsError(SkewMixError):
    """Failure inside the probability and linear-algebra kernel."""

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message, stage="numerics", details=_clean(details))


class ParameterError(SkewMixError):
    """Invalid or infeasible distribution parameters."""

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message, stage="parameters", details=_clean(details))


class EstimationError(SkewMixError):
    """Failure while fitting a mixture model."""

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message, stage="estimation", details=_clean(details))


class DataError(SkewMixError):
    """Problems with input data or label vectors."""

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message, stage="data", details=_clean(details))


class ConfigurationError(SkewMixError):
    """
    Exception for configuration-related errors.

    Args:
        message: Error message
        config_path: Path to configuration file
        config_section: Configuration section with error
    """

    def __init__(
        self,
        message: str,
        config_path: str | None = None,
        config_section: str | None = None,
    ) -> None:
        self.config_path = config_path
        self.config_section = config_section
        details = {}
        if config_path:
            details["config_path"] = config_path
        if config_section:
            details["config_section"] = config_section
        super().__init__(message, stage="configuration", details=details)


# numerics


class NotPositiveDefiniteError(NumericsError):
    """A matrix that must be symmetric positive definite is not."""


class DimensionMismatchError(NumericsError):
    """Vector and matrix shapes disagree."""


class InvalidDofError(NumericsError):
    """Degrees of freedom outside (0, inf]."""


class DimensionTooLargeError(NumericsError):
    """Dimension exceeds the supported bound of a Monte-Carlo routine."""


class InvalidVarianceError(NumericsError):
    """A variance argument is not strictly positive."""


class MomentUndefinedError(NumericsError):
    """The requested moment does not exist for the given degrees of freedom."""


class EmptyInputError(NumericsError):
    """An operation that needs at least one value received none."""


class InvalidDrawCountError(NumericsError):
    """Monte-Carlo draw count below the supported minimum."""


# parameters


class InfeasibleSkewnessError(ParameterError):
    """Skewness parameters leave the feasibility region."""


class RejectionBudgetExceededError(ParameterError):
    """Rejection sampling ran out of its trial budget."""


# estimation


class AllZeroLikelihoodError(EstimationError):
    """Every component assigns zero density to an observation."""


class DegenerateComponentError(EstimationError):
    """A mixture component collapsed during fitting."""


class DofSolveFailedError(EstimationError):
    """The degrees-of-freedom search found no root or maximum in range."""


class EffectiveSampleSizeTooLowError(EstimationError):
    """Importance weights in the Monte-Carlo E-step are too concentrated."""


class InitFailedError(EstimationError):
    """Initialization could not produce a usable starting model."""


# data


class ParseError(DataError):
    """A CSV cell could not be parsed as a number."""


class MissingValueError(DataError):
    """A CSV cell is empty or NaN."""


class LabelNotIntegerError(DataError):
    """A label column holds values that are not contiguous integers."""


class TooManyClassesError(DataError):
    """Exhaustive permutation search refused for too many classes."""


class LengthMismatchError(DataError):
    """Two label vectors have different lengths."""


def _clean(details: dict[str, Any]) -> dict[str, Any]:
    """Drop unset entries and stringify values that are not JSON scalars."""
    cleaned: dict[str, Any] = {}
    for key, value in details.items():
        if value is None:
            continue
        if isinstance(value, (str, int, float, bool)):
            cleaned[key] = value
        else:
            cleaned[key] = str(value)
    return cleaned
