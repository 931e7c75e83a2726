"""
Exception hierarchy of tlsnoise.

Every error carries a `category` which the command-line front end maps to an
exit status. Each class also derives from the closest builtin exception, so
that callers can keep catching `ValueError` and friends.
"""

from typing import Dict

EXIT_CODES: Dict[str, int] = {
    "config": 2,
    "io": 3,
    "numerical": 4,
    "generation": 5,
}


class TlsNoiseError(Exception):
    category: str = "internal"

    def exit_code(self) -> int:
        return EXIT_CODES.get(self.category, 1)


class DomainError(TlsNoiseError, ValueError):
    """
    An argument lies outside the domain of a physical law or estimator.
    """

    category = "numerical"


class SingularPointError(DomainError):
    category = "numerical"


class NumericalError(TlsNoiseError, ArithmeticError):
    category = "numerical"


class FitError(NumericalError):
    """
    A least-squares fit did not produce a valid solution. The message holds
    the optimizer trace.
    """

    category = "numerical"


class InsufficientDataError(TlsNoiseError, ValueError):
    category = "numerical"


class ShapeError(TlsNoiseError, ValueError):
    category = "numerical"


class ConfigError(TlsNoiseError, ValueError):
    category = "config"


class SchemaError(TlsNoiseError, ValueError):
    category = "io"


class GenerationError(TlsNoiseError, RuntimeError):
    category = "generation"
