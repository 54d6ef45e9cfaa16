"""Exception types shared across the package."""


class DiverseFlowError(Exception):
    """Base class for all library errors."""


class InputFormatError(DiverseFlowError):
    """A problem input file could not be parsed.

    Carries the 1-based line number when one is known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(DiverseFlowError):
    """Mutually incompatible run options (e.g. table measure with the cut backend)."""


class InternalInvariantError(DiverseFlowError):
    """A structural guarantee failed; indicates a bug, never bad user input."""


class OracleSizeError(DiverseFlowError):
    """A brute-force routine was asked to enumerate beyond its hard size guard."""
