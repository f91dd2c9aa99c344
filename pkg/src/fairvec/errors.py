"""Exception types shared across the package."""


class FairvecError(Exception):
    """Base class for all errors raised by this package."""


class InputError(FairvecError, ValueError):
    """Caller passed inconsistent or out-of-contract arguments."""


class NumericalError(FairvecError, ArithmeticError):
    """A numerical routine could not complete (e.g. singular system)."""


class UndefinedCorrelationError(FairvecError, ValueError):
    """Correlation is undefined because an input sequence is constant."""


class ParseError(FairvecError, ValueError):
    """A data file violates its documented format."""


class ConfigError(FairvecError, ValueError):
    """A configuration value makes the requested operation impossible."""
