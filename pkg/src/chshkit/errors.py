"""Exception hierarchy."""


class ChshKitError(Exception):
    """Base class for all errors raised by chshkit."""


class DimensionError(ChshKitError, ValueError):
    pass


class NumericalError(ChshKitError, ArithmeticError):
    pass


class NormalizationError(ChshKitError, ValueError):
    pass


class NotEntangledError(ChshKitError, ValueError):
    """Raised when an operation needs at least two nonzero Schmidt coefficients."""


class RangeError(ChshKitError, ValueError):
    pass


class ConfigError(ChshKitError, ValueError):
    pass
