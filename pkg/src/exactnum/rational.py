import re
from fractions import Fraction
from typing import Union

import sympy
from sympy import QQ

Rational = Fraction

RationalLike = Union[int, str, Fraction, sympy.Rational]

_RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p" into a canonical Fraction. Decimal points are rejected."""
    match = _RATIONAL_PATTERN.match(text)
    if not match:
        raise ValueError(f"Not an exact rational literal: {text!r}")
    numerator, denominator = match.groups()
    if denominator is not None and int(denominator) == 0:
        raise ValueError(f"Zero denominator in {text!r}")
    return Fraction(int(numerator), int(denominator or 1))


def format_rational(value: Fraction) -> str:
    value = to_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions, sympy Rationals and QQ domain elements to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"Cannot convert {type(value).__name__} to an exact rational")


def to_domain(value: Fraction):
    return QQ(value.numerator, value.denominator)


def to_sympy(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def random_rational(rng, bound: int) -> Fraction:
    """p/q with p, q drawn from [-bound, bound] without 0."""
    choices = [n for n in range(-bound, bound + 1) if n != 0]
    return Fraction(rng.choice(choices), rng.choice(choices))
