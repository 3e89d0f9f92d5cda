"""Exception hierarchy.

Two broad families matter downstream: data problems (bad files, bad schema,
bad cell values) and numeric problems (singular systems, non-finite values).
The CLI maps them to distinct exit codes.
"""


class SteelPowerError(Exception):
    """Base class for all package errors."""


class DataError(SteelPowerError, ValueError):
    """Malformed input data or an operation misused on it."""


class ParseError(DataError):
    """CSV structure problem (ragged row, missing header)."""


class SchemaError(DataError):
    """Column/role mapping problem (missing column, bad role)."""


class EncodingError(DataError):
    """Cell-level problem while building the numeric matrix."""


class NumericError(SteelPowerError, ArithmeticError):
    """Numeric failure during fitting or evaluation."""


class SingularMatrixError(NumericError):
    """Normal equations too ill-conditioned to solve reliably."""
