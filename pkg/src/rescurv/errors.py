"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: parameter-like errors exit 1,
resource caps exit 2, internal consistency failures exit 3.
"""


class RescurvError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 1


class ParameterError(RescurvError, ValueError):
    """Malformed input: bad sizes, misaligned vectors, unknown names."""


class ConnectivityError(ParameterError):
    """The operation needs a connected graph."""


class PreconditionError(ParameterError):
    """Input is well formed but violates an operation precondition."""


class StructuralError(ParameterError):
    """A construction produced a graph outside the supported class."""


class DataError(ParameterError):
    """Externally supplied data is inconsistent."""


class ResourceError(RescurvError):
    """An enumeration or iteration cap was exceeded."""

    exit_code = 2


class ConsistencyError(RescurvError):
    """A proved identity failed to hold; indicates a bug."""

    exit_code = 3
