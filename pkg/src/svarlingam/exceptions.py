"""Exception hierarchy.

Grouped so the CLI can map failures to exit codes: config problems,
data problems, and numerical/identification problems.
"""


class SvarLingamError(Exception):
    """Base class for all package errors."""


class ConfigError(SvarLingamError):
    """Invalid or missing configuration."""


class DataError(SvarLingamError):
    """Problems with input data (parsing, alignment, domains)."""


class SchemaError(DataError):
    """CSV header is missing a required column."""


class RowParseError(DataError):
    """A CSV row could not be parsed; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class EmptyInputError(DataError):
    """A file or series contained no observations."""


class DuplicateDateError(DataError):
    """A series contained the same date twice."""


class AlignmentError(DataError):
    """Series share no common dates."""


class DomainError(DataError):
    """A value lies outside the mathematical domain of an operation."""


class GapError(DataError):
    """A requested fill range starts before the first observation."""


class EmptySliceError(DataError):
    """A date slice selected no rows."""


class InsufficientDataError(DataError):
    """Too few observations for the requested estimation."""


class NumericalError(SvarLingamError):
    """Numerical or identification failures during estimation."""


class DegenerateRegressionError(NumericalError):
    """Regressor matrix is rank deficient or a variable has zero variance."""


class DegeneracyError(NumericalError):
    """A covariance or product-moment matrix is singular."""


class UnsupportedDimensionError(NumericalError):
    """System size exceeds the embedded critical-value tables."""


class UnsupportedSizeError(NumericalError):
    """Sample or system size outside the supported range of a procedure."""


class IdentificationError(NumericalError):
    """No admissible permutation exists (LiNGAM identification failure)."""


class BootstrapReliabilityError(NumericalError):
    """Too many bootstrap replicates were degenerate to trust the summary."""
