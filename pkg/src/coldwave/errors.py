"""Exception hierarchy shared across the solver."""


class ColdwaveError(Exception):
    """Base class for all package errors."""


class VacuumError(ColdwaveError):
    """The density 1 + eta dropped to (or below) the vacuum threshold."""


class SolveError(ColdwaveError):
    """The elliptic constraint solve did not reach the requested residual."""


class BlowupError(ColdwaveError):
    """A field exceeded the magnitude guard or became non-finite."""


class ConfigError(ColdwaveError):
    """A run was refused before stepping (e.g. the CFL guard failed)."""


class ParseError(ColdwaveError):
    """Malformed configuration text; carries a line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(ColdwaveError):
    """A configuration value violates a constraint; names the key."""


class HarnessError(ColdwaveError):
    """A study run failed; message carries the level / parameter attribution."""
