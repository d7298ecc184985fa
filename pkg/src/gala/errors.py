"""Exception types shared across the package."""


class GalaError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(GalaError, ValueError):
    """Operands disagree in length, shape, or modulus."""


class ParameterError(GalaError, ValueError):
    """A parameter violates its documented constraints."""


class NoiseOverflowError(GalaError, RuntimeError):
    """Ciphertext noise reached the decryption budget; decryption would fail."""


class NetworkParseError(GalaError, ValueError):
    """A network description file could not be parsed."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
