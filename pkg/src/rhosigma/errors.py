"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument is outside the domain an operation accepts."""


class UnsupportedCharacteristicError(ParameterError):
    """PSL(2, q) requested in characteristic 2, 3 or 5."""


class TooLargeError(ValueError):
    """An exhaustive search would exceed its size guard."""
