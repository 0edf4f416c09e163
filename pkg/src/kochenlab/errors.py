"""Exception taxonomy shared by every module.

The CLI maps these onto exit codes: input errors exit 2, resource limits
exit 3, failed consistency checks exit 4.
"""


class KochenlabError(Exception):
    exit_code = 1


class InputError(KochenlabError, ValueError):
    """Malformed or out-of-domain arguments."""

    exit_code = 2


class PreconditionError(InputError):
    """The hypothesis of a checked statement is not met by the given data."""


class UnsupportedError(InputError):
    """The request is well formed but outside what is implemented."""


class ResourceError(KochenlabError):
    """An enumeration or precision budget was exceeded."""

    exit_code = 3


class NotFoundError(ResourceError):
    """A bounded search finished without a result."""


class InvariantViolation(KochenlabError, AssertionError):
    """A verified identity failed. Never expected; indicates a bug or a counterexample."""

    exit_code = 4
