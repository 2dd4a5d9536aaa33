"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class AdoError(Exception):
    exit_code = 2


class InputError(AdoError, ValueError):
    exit_code = 2


class GraphFormatError(AdoError, ValueError):
    """Malformed edge-list, instance, or oracle file."""

    exit_code = 4


class ParameterError(AdoError, ValueError):
    exit_code = 5


class CapacityError(AdoError, MemoryError):
    exit_code = 5


class NonConvergenceError(AdoError, RuntimeError):
    exit_code = 6

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
