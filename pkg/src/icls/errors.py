"""Exception types raised by the toolkit."""


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(ToolkitError):
    """Operand shapes do not conform (caller broke an interface contract)."""


class InputError(ToolkitError):
    """Numeric input is invalid: non-finite entries, asymmetry beyond
    tolerance, out-of-range values, or impossible sizes."""


class DataError(ToolkitError):
    """Problem with a dataset or data file."""


class MissingFileError(DataError):
    """The requested data file does not exist."""


class LabelCountError(DataError):
    """The label column does not contain exactly two distinct classes."""


class EmptyDataError(DataError):
    """No usable rows remain after cleaning."""
