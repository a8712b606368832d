import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import sympy
from sympy import QQ, Poly
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .rational import to_fraction, to_sympy

VARIABLE = sympy.Symbol("z")

_OPERATOR_PATTERN = re.compile(r"^[0-9+\-*/^() \t]*$")


class IrrationalPole(ValueError):
    pass


def _poly(coefficients_low_first: Sequence) -> Poly:
    coeffs = [to_sympy(to_fraction(c)) for c in coefficients_low_first] or [0]
    return Poly(list(reversed(coeffs)), VARIABLE, domain=QQ)


def _low_first(poly: Poly) -> List[Fraction]:
    if poly.is_zero:
        return [Fraction(0)]
    return [to_fraction(c) for c in reversed(poly.all_coeffs())]


def _reversed(poly: Poly) -> Poly:
    """z^deg * p(1/z)."""
    if poly.is_zero:
        return poly
    return Poly(list(reversed(poly.all_coeffs())), VARIABLE, domain=QQ)


@dataclass(frozen=True)
class RationalFunction:
    """numerator/denominator in QQ[z], coprime, denominator monic."""

    numerator: Poly
    denominator: Poly

    @classmethod
    def create(cls, numerator: Poly, denominator: Poly) -> "RationalFunction":
        numerator = Poly(numerator, VARIABLE, domain=QQ)
        denominator = Poly(denominator, VARIABLE, domain=QQ)
        if denominator.is_zero:
            raise ZeroDivisionError("Rational function with zero denominator")
        if numerator.is_zero:
            return cls(Poly(0, VARIABLE, domain=QQ), Poly(1, VARIABLE, domain=QQ))
        common = numerator.gcd(denominator)
        numerator = numerator.exquo(common)
        denominator = denominator.exquo(common)
        lead = denominator.LC()
        return cls(numerator.exquo_ground(lead), denominator.monic())

    @classmethod
    def from_coefficients(cls, numerator: Sequence, denominator: Sequence = (1,)) -> "RationalFunction":
        """Coefficient lists run from the constant term upwards."""
        return cls.create(_poly(numerator), _poly(denominator))

    @classmethod
    def constant(cls, value) -> "RationalFunction":
        return cls.from_coefficients([value])

    @classmethod
    def zero(cls) -> "RationalFunction":
        return cls.constant(0)

    @classmethod
    def monomial(cls, coefficient, exponent: int) -> "RationalFunction":
        """coefficient * z^exponent; negative exponents allowed."""
        if exponent >= 0:
            return cls.from_coefficients([0] * exponent + [coefficient])
        return cls.from_coefficients([coefficient], [0] * (-exponent) + [1])

    @classmethod
    def polar_term(cls, coefficient, center, order: int) -> "RationalFunction":
        """coefficient / (z - center)^order."""
        center = to_fraction(center)
        base = Poly(VARIABLE - to_sympy(center), VARIABLE, domain=QQ)
        return cls.create(_poly([coefficient]), base ** order)

    @classmethod
    def from_text(cls, text: str, variable: str = "z") -> "RationalFunction":
        if not _OPERATOR_PATTERN.match(re.sub(rf"\b{re.escape(variable)}\b", "", text)):
            raise ValueError(f"Rational function text may only use integer literals, '{variable}' and + - * / ^ ( ): {text!r}")
        symbol = sympy.Symbol(variable)
        try:
            expr = parse_expr(
                text,
                local_dict={variable: symbol},
                transformations=standard_transformations + (convert_xor,),
            )
        except (SyntaxError, TypeError, ZeroDivisionError) as e:
            raise ValueError(f"Cannot parse rational function {text!r}: {e}")
        expr = sympy.sympify(expr)
        if expr.has(sympy.Float) or not expr.free_symbols <= {symbol}:
            raise ValueError(f"Rational function {text!r} must be exact and in the single variable '{variable}'")
        if expr.has(sympy.zoo, sympy.nan):
            raise ValueError(f"Rational function {text!r} divides by zero")
        numerator, denominator = sympy.fraction(sympy.together(expr.subs(symbol, VARIABLE)))
        try:
            return cls.create(Poly(numerator, VARIABLE, domain=QQ), Poly(denominator, VARIABLE, domain=QQ))
        except sympy.PolynomialError as e:
            raise ValueError(f"{text!r} is not a rational function of '{variable}': {e}")

    def to_text(self, variable: str = "z") -> str:
        symbol = sympy.Symbol(variable)
        numerator = sympy.sstr(self.numerator.as_expr().subs(VARIABLE, symbol))
        if self.denominator.degree() == 0:
            return numerator
        denominator = sympy.sstr(self.denominator.as_expr().subs(VARIABLE, symbol))
        return f"({numerator})/({denominator})"

    def __str__(self) -> str:
        return self.to_text()

    @property
    def is_zero(self) -> bool:
        return self.numerator.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.denominator.degree() == 0

    def numerator_coefficients(self, shift: Optional[Fraction] = None) -> List[Fraction]:
        """Coefficients of numerator(u + shift), constant term first."""
        poly = self.numerator if shift is None else self.numerator.shift(to_sympy(to_fraction(shift)))
        return _low_first(poly)

    def denominator_coefficients(self, shift: Optional[Fraction] = None) -> List[Fraction]:
        poly = self.denominator if shift is None else self.denominator.shift(to_sympy(to_fraction(shift)))
        return _low_first(poly)

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.create(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.create(self.numerator * other.numerator, self.denominator * other.denominator)

    def scale(self, factor) -> "RationalFunction":
        factor = to_fraction(factor)
        if factor == 0:
            return RationalFunction.zero()
        return RationalFunction(self.numerator.mul_ground(to_sympy(factor)), self.denominator)

    def times_power(self, exponent: int) -> "RationalFunction":
        """self * z^exponent."""
        return self * RationalFunction.monomial(1, exponent)

    def reciprocal_substitution(self) -> "RationalFunction":
        """f(1/z), exact."""
        if self.is_zero:
            return self
        shift = self.denominator.degree() - self.numerator.degree()
        base = RationalFunction.create(_reversed(self.numerator), _reversed(self.denominator))
        return base.times_power(shift)

    def evaluate(self, point) -> Fraction:
        point = to_sympy(to_fraction(point))
        denominator = self.denominator.eval(point)
        if denominator == 0:
            raise ZeroDivisionError(f"{self} has a pole at {point}")
        return to_fraction(self.numerator.eval(point)) / to_fraction(denominator)

    def denominator_roots(self) -> Dict[Fraction, int]:
        """Rational poles with multiplicities. Irreducible factors of degree >= 2 are rejected."""
        roots: Dict[Fraction, int] = {}
        if self.denominator.degree() == 0:
            return roots
        _, factors = self.denominator.factor_list()
        for factor, multiplicity in factors:
            if factor.degree() != 1:
                raise IrrationalPole(f"Denominator factor {factor.as_expr()} has no rational root")
            a, b = factor.all_coeffs()
            roots[-to_fraction(b) / to_fraction(a)] = multiplicity
        return dict(sorted(roots.items()))
