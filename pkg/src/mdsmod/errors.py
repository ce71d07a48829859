"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class IntegrityError(ValueError):
    """A tuple or codeword violates the parity rule of its code."""


class ConfigurationError(ValueError):
    """A parameter combination the library does not support."""


class DegenerateChannelError(ArithmeticError):
    """A fading gain is too close to zero to equalize."""
