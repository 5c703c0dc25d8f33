"""Exception types shared across the package."""


class LwfError(Exception):
    """Base class for every error raised by this package."""


class DomainError(LwfError):
    """An argument lies outside the mathematical domain of the operation."""


class ParamError(LwfError):
    """A parameter value violates its declared constraint."""


class InputError(LwfError):
    """Input data is unusable: too short, non-finite, or without spread."""


class DegenerateError(LwfError):
    """The requested statistic is undefined for degenerate data."""


class FitError(LwfError):
    """An iterative fit failed to produce finite estimates."""


class RangeError(LwfError):
    """An index, lag, or window falls outside the usable range."""


class ParseError(LwfError):
    """A text field could not be parsed as a number."""


class IoError(LwfError):
    """A file could not be read or written."""
