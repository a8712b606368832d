import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

from .rational import format_rational, to_fraction

logger = logging.getLogger(__name__)


class QueryBeyondTruncation(LookupError):
    pass


class SeriesZeroDivision(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class LaurentSeries:
    """Exact truncated Laurent series sum c_j t^(valuation + j), known below truncation_order.

    Coefficients at or beyond truncation_order are unknown, not zero. Instances are
    canonical: no leading or trailing zero coefficients are stored, and the zero
    series has valuation == truncation_order.
    """

    valuation: int
    coefficients: Tuple[Fraction, ...]
    truncation_order: int

    @classmethod
    def build(cls, valuation: int, coefficients: Iterable, truncation_order: int) -> "LaurentSeries":
        coeffs = [to_fraction(c) for c in coefficients]
        # drop everything at or past the truncation
        coeffs = coeffs[: max(truncation_order - valuation, 0)]
        start = 0
        while start < len(coeffs) and coeffs[start] == 0:
            start += 1
        end = len(coeffs)
        while end > start and coeffs[end - 1] == 0:
            end -= 1
        if start == end:
            return cls(truncation_order, (), truncation_order)
        return cls(valuation + start, tuple(coeffs[start:end]), truncation_order)

    @classmethod
    def zero(cls, truncation_order: int) -> "LaurentSeries":
        return cls(truncation_order, (), truncation_order)

    @classmethod
    def from_terms(cls, terms: Dict[int, object], truncation_order: int) -> "LaurentSeries":
        """Series from an exponent -> coefficient mapping (a Laurent polynomial known to truncation_order)."""
        if not terms:
            return cls.zero(truncation_order)
        low = min(terms)
        high = max(terms)
        coeffs = [terms.get(n, 0) for n in range(low, high + 1)]
        return cls.build(low, coeffs, truncation_order)

    @classmethod
    def from_polynomial(cls, coefficients: Sequence, truncation_order: int) -> "LaurentSeries":
        """coefficients[n] is the coefficient of t^n."""
        return cls.build(0, coefficients, truncation_order)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def pole_order(self) -> int:
        return max(-self.valuation, 0) if not self.is_zero else 0

    def terms(self) -> Dict[int, Fraction]:
        return {self.valuation + j: c for j, c in enumerate(self.coefficients) if c != 0}

    def coefficient(self, n: int) -> Fraction:
        return series_coeff(self, n)

    def coefficient_vector(self, start: int, stop: int) -> Tuple[Fraction, ...]:
        return tuple(series_coeff(self, n) for n in range(start, stop))

    def principal_part(self) -> Dict[int, Fraction]:
        return {n: c for n, c in self.terms().items() if n < 0}

    def truncated(self, truncation_order: int) -> "LaurentSeries":
        if truncation_order > self.truncation_order:
            raise QueryBeyondTruncation(
                f"Cannot raise truncation from {self.truncation_order} to {truncation_order}"
            )
        return LaurentSeries.build(self.valuation, self.coefficients, truncation_order)

    def evaluate(self, point: Fraction) -> Fraction:
        """Value of the stored (truncated) terms at a nonzero rational point."""
        point = to_fraction(point)
        return sum((c * point ** n for n, c in self.terms().items()), Fraction(0))

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        return series_add(self, other)

    def __neg__(self) -> "LaurentSeries":
        return series_scale(self, Fraction(-1))

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return series_add(self, series_scale(other, Fraction(-1)))

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        return series_mul(self, other)

    def __str__(self) -> str:
        if self.is_zero:
            return f"O(t^{self.truncation_order})"
        parts = [f"{format_rational(c)}*t^{n}" for n, c in sorted(self.terms().items())]
        return " + ".join(parts) + f" + O(t^{self.truncation_order})"


def series_add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    trunc = min(a.truncation_order, b.truncation_order)
    start = min(a.valuation, b.valuation, trunc)
    coeffs = [Fraction(0)] * max(trunc - start, 0)
    for series in (a, b):
        for n, c in series.terms().items():
            if n < trunc:
                coeffs[n - start] += c
    return LaurentSeries.build(start, coeffs, trunc)


def series_scale(a: LaurentSeries, c) -> LaurentSeries:
    c = to_fraction(c)
    return LaurentSeries.build(a.valuation, (c * x for x in a.coefficients), a.truncation_order)


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    trunc = min(a.valuation + b.truncation_order, b.valuation + a.truncation_order)
    start = a.valuation + b.valuation
    length = max(trunc - start, 0)
    coeffs = [Fraction(0)] * length
    for i, ai in enumerate(a.coefficients):
        if ai == 0 or i >= length:
            continue
        for j, bj in enumerate(b.coefficients):
            if i + j >= length:
                break
            coeffs[i + j] += ai * bj
    return LaurentSeries.build(start, coeffs, trunc)


def series_pow(a: LaurentSeries, n: int) -> LaurentSeries:
    if n < 0:
        raise ValueError("series_pow takes a non-negative exponent; invert first")
    if n == 0:
        return LaurentSeries.from_polynomial([1], a.truncation_order - a.valuation)
    result = a
    for _ in range(n - 1):
        result = series_mul(result, a)
    return result


def series_coeff(a: LaurentSeries, n: int) -> Fraction:
    if n >= a.truncation_order:
        raise QueryBeyondTruncation(
            f"Coefficient of t^{n} requested but series is only known below t^{a.truncation_order}"
        )
    index = n - a.valuation
    if index < 0 or index >= len(a.coefficients):
        return Fraction(0)
    return a.coefficients[index]


def series_shift(a: LaurentSeries, m: int) -> LaurentSeries:
    """Multiply by t^m."""
    return LaurentSeries(a.valuation + m, a.coefficients, a.truncation_order + m)


def series_compose_power(a: LaurentSeries, e: int) -> LaurentSeries:
    if e < 1:
        raise ValueError(f"Substitution exponent must be positive, got {e}")
    if a.is_zero:
        return LaurentSeries.zero(a.truncation_order * e)
    coeffs = [Fraction(0)] * ((len(a.coefficients) - 1) * e + 1)
    for j, c in enumerate(a.coefficients):
        coeffs[j * e] = c
    return LaurentSeries.build(a.valuation * e, coeffs, a.truncation_order * e)


def series_invert(a: LaurentSeries) -> LaurentSeries:
    if a.is_zero:
        raise SeriesZeroDivision(f"Series is zero below t^{a.truncation_order}; no inverse")
    precision = a.truncation_order - a.valuation
    lead = a.coefficients[0]
    inverse = [Fraction(1) / lead]
    for n in range(1, precision):
        total = Fraction(0)
        for i in range(1, min(n, len(a.coefficients) - 1) + 1):
            total += a.coefficients[i] * inverse[n - i]
        inverse.append(-total / lead)
    return LaurentSeries.build(-a.valuation, inverse, -a.valuation + precision)


def series_derivative(a: LaurentSeries) -> LaurentSeries:
    if a.is_zero:
        return LaurentSeries.zero(a.truncation_order - 1)
    terms = {n - 1: n * c for n, c in a.terms().items() if n != 0}
    return LaurentSeries.from_terms(terms, a.truncation_order - 1)


def series_expand(f, center, trunc: int) -> LaurentSeries:
    """Laurent expansion of the rational function f at z = center in u = z - center, known below u^trunc."""
    center = to_fraction(center)
    if f.is_zero:
        return LaurentSeries.zero(trunc)
    numerator = f.numerator_coefficients(shift=center)
    denominator = f.denominator_coefficients(shift=center)
    pole_order = 0
    while denominator[pole_order] == 0:
        pole_order += 1
    unit_part = denominator[pole_order:]
    working = trunc + pole_order
    if working <= 0:
        return LaurentSeries.zero(trunc)
    quotient = series_mul(
        LaurentSeries.from_polynomial(numerator, working),
        series_invert(LaurentSeries.from_polynomial(unit_part, working)),
    )
    expansion = series_shift(quotient, -pole_order)
    logger.debug(f"Expanded {f} at {center}: valuation {expansion.valuation}, trunc {expansion.truncation_order}")
    return expansion


def default_truncation(max_conductor_exponent: int, k: int, max_pole_order: int, guard: int) -> int:
    """N = 2 * max c_i + k * max pole order + guard."""
    return 2 * max_conductor_exponent + k * max_pole_order + guard
