"""
Error types raised by the library and mapped to exit codes by the CLI.
"""


class ArchTestError(Exception):
    """Base class for all errors raised by this package."""


class ParameterDomainError(ArchTestError, ValueError):
    """A copula parameter (or target tau / lambda_U) is outside its domain."""


class DataQualityError(ArchTestError, ValueError):
    """Input data cannot be used: ties under the 'error' policy, bad cells, too few rows."""


class ConfigError(ArchTestError, ValueError):
    """Invalid test or study configuration."""


class SpecParseError(ArchTestError, ValueError):
    """Model specification string does not follow the grammar."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at offset {position}")


class BootstrapError(ArchTestError, RuntimeError):
    """Internal failure of the multiplier bootstrap (e.g. redraw exhaustion)."""
