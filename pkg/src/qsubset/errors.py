"""Exception types shared across the package."""


class QsubsetError(Exception):
    """Base class for every error raised by this package."""


class SubsetTooLarge(QsubsetError):
    """A candidate subset has more columns than the design has rows."""


class DimensionTooLarge(QsubsetError):
    """A search-space or statevector dimension exceeds the memory guard."""


class EmptyTestSet(QsubsetError):
    """A held-out evaluation was requested but the test set has no rows."""


class ZeroVector(QsubsetError):
    """A vector that must be normalized has zero norm."""


class DegenerateMarking(QsubsetError):
    """A two-level Grover state needs 1 <= M <= D-1 marked states."""


class DomainError(QsubsetError):
    """A numeric argument lies outside the domain of the requested map."""


class ConditionViolated(QsubsetError):
    """A stated precondition on parameters does not hold."""


class NoConvergence(QsubsetError):
    """An iterative solver exhausted its budget before reaching tolerance."""


class DegenerateSignal(QsubsetError):
    """A signal-to-noise ratio was requested for a coefficient vector with zero signal."""


class DataError(QsubsetError):
    """Base class for problems with user-supplied data files."""


class ParseError(DataError):
    """A data file is structurally malformed."""


class MissingColumn(DataError):
    """A named column is absent from a data file."""


class NonNumericCell(DataError):
    """A data cell could not be parsed as a number."""
