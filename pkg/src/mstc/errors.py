"""Exception hierarchy for the scoring pipeline.

Every exception carries a stable ``code`` string that survives serialization
across the CLI and foreign-language bridges; built-in ``FileNotFoundError`` is
reported under the code ``"FileNotFound"``.
"""


class MstcError(Exception):
    """Base class for all pipeline errors."""

    code = "MstcError"


class FormatError(MstcError):
    """Malformed input file (bad header, row length mismatch, truncation)."""

    code = "FormatError"


class NonFiniteValueError(MstcError):
    """NaN or Inf encountered where finite values are required."""

    code = "NonFiniteValue"


class InvalidPercentileError(MstcError):
    """Percentile outside the open interval (0, 100)."""

    code = "InvalidPercentile"


class EmptyPointSetError(MstcError):
    """Graph construction requested over zero points."""

    code = "EmptyPointSet"


class DisconnectedGraphError(MstcError):
    """Graph has more than one connected component where one is required."""

    code = "DisconnectedGraph"


class TooFewNodesError(MstcError):
    """Operation undefined below two nodes."""

    code = "TooFewNodes"


class NonPositiveAreaError(MstcError):
    """Non-degenerate hull reported a non-positive area (internal inconsistency)."""

    code = "NonPositiveArea"


class ZeroLengthError(MstcError):
    """Spanning tree length must be positive."""

    code = "ZeroLength"


class AllZeroError(MstcError):
    """Metric undefined on an all-zero attribution vector."""

    code = "AllZero"


class LengthMismatchError(MstcError):
    """Paired sequences differ in length or are too short."""

    code = "LengthMismatch"


class ZeroVarianceError(MstcError):
    """Correlation undefined for a constant sequence."""

    code = "ZeroVariance"


class InvalidSpecError(MstcError):
    """Synthetic map specification failed validation."""

    code = "InvalidSpec"


CODE_FILE_NOT_FOUND = "FileNotFound"


def error_code(exc: BaseException) -> str:
    """Stable error name for an exception, for CLI/bridge serialization."""
    if isinstance(exc, MstcError):
        return exc.code
    if isinstance(exc, FileNotFoundError):
        return CODE_FILE_NOT_FOUND
    return type(exc).__name__
