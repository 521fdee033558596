import re
from fractions import Fraction
from typing import Union

from app.core.exceptions import InputError

# Fraction keeps numerator/denominator reduced with a positive denominator.
Rational = Fraction

RationalLike = Union[Fraction, int, str]

_RATIONAL_PATTERN = re.compile(r"^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$")


def parse_rational(text: str) -> Fraction:
    """
    Parse a rational written as "p/q" or "p"

    Args:
        text: String form of the rational

    Returns:
        The exact rational value

    Raises:
        InputError: If the string is not an integer or integer ratio
    """
    if not isinstance(text, str) or not _RATIONAL_PATTERN.match(text):
        raise InputError(f"not a rational: {text!r}")
    try:
        return Fraction(text.replace(" ", ""))
    except ZeroDivisionError:
        raise InputError(f"zero denominator in {text!r}")


def to_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise InputError(f"not a rational: {value!r}")


def format_rational(value: Fraction) -> str:
    """Render as "p/q", or "p" when the denominator is 1."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
