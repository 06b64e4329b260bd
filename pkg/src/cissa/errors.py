"""Exception hierarchy shared by the library and the command line tool."""


class CissaError(Exception):
    """Base class for all errors raised by :mod:`cissa`."""


class ParameterError(CissaError, ValueError):
    """An argument is out of its admissible range or inconsistent."""


class InputError(CissaError, ValueError):
    """Input data cannot be parsed or contains invalid values."""


class NumericError(CissaError, ArithmeticError):
    """A numerical consistency check failed during computation."""
