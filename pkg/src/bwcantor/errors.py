"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`BWError`.
The CLI maps each family onto an exit code via :attr:`BWError.exit_code`.
"""

from __future__ import annotations

import os

#: Default ceiling on the bit length of any integer the library materializes.
DEFAULT_BUDGET_BITS = 2**20

BUDGET_ENV_VAR = "BW_BIGINT_BUDGET_BITS"


def default_budget_bits() -> int:
    """Bit budget from the environment, falling back to :data:`DEFAULT_BUDGET_BITS`."""
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None or raw == "":
        return DEFAULT_BUDGET_BITS
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError(f"{BUDGET_ENV_VAR} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValidationError(f"{BUDGET_ENV_VAR} must be a positive integer, got {raw!r}")
    return value


class BWError(Exception):
    exit_code = 1


class ValidationError(BWError, ValueError):
    """Malformed input: bad literal, violated precondition, unknown config key."""

    exit_code = 2


class StageOutOfRange(ValidationError):
    pass


class SeedUnevaluable(ValidationError):
    """An explicit seed prefix is too short for the requested term."""


class InvalidSeed(ValidationError):
    """A seed sequence is not strictly increasing or not positive."""


class WindowTooSmall(ValidationError):
    pass


class IndexUnrepresentable(BWError):
    """A required integer would exceed the configured bit budget."""

    exit_code = 3

    def __init__(self, what: str, bits: int | str | None = None, budget: int | None = None):
        self.what = what
        self.bits = bits
        self.budget = budget
        detail = what
        if bits is not None:
            detail += f" (needs {fmt_int(bits) if isinstance(bits, int) else bits} bits"
            detail += f", budget {budget})" if budget is not None else ")"
        super().__init__(detail)


class GeometryError(BWError):
    exit_code = 4


class ResolutionTooCoarse(GeometryError):
    pass


class DepthTooLarge(GeometryError, ValidationError):
    exit_code = 2


class StepTooLarge(GeometryError):
    pass


class CurvesTooClose(GeometryError):
    pass


def check_bits(value_bits: int, what: str, budget: int) -> None:
    """Raise :class:`IndexUnrepresentable` if ``value_bits`` exceeds ``budget``."""
    if value_bits > budget:
        raise IndexUnrepresentable(what, value_bits, budget)


def fmt_int(n: int, max_digits: int = 60) -> str:
    """Short text for an integer in a message; huge values show their bit length."""
    if n.bit_length() <= max_digits * 3:
        return str(n)
    return f"<{n.bit_length()}-bit integer>"
