"""Exception hierarchy shared across the package."""


class BinRatioError(Exception):
    """Base class for all package errors."""


class ParameterError(BinRatioError, ValueError):
    """A model parameter is outside its admissible domain."""


class RegimeError(BinRatioError, ValueError):
    """An asymptotic regime is malformed or incompatible with a request."""


class BudgetError(BinRatioError, RuntimeError):
    """An exact-enumeration request exceeds the computational budget."""
