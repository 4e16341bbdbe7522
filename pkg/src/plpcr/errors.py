"""Exception hierarchy shared by all plpcr modules."""


class PlpcrError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PlpcrError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class NumericError(PlpcrError, ArithmeticError):
    """An iterative numerical routine failed to converge."""


class ValidationError(PlpcrError, ValueError):
    """Input data violates a structural constraint (bad row, bad ordering)."""


class EstimationError(PlpcrError, ValueError):
    """An estimator's existence condition is not met by the data."""


class ImproperPosteriorError(EstimationError):
    """A requested posterior is improper for the observed counts."""


class UnsupportedModelError(EstimationError):
    """The requested prior/model combination has no closed-form posterior."""


class DiagnosticError(PlpcrError, ValueError):
    """A diagnostic cannot be computed for the given history."""


class StudyError(PlpcrError, RuntimeError):
    """A replication study produced no usable replications."""
