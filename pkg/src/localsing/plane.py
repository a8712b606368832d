import logging
from typing import Optional, Union

import sympy
from sympy import QQ, Poly
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from ..exactnum import LaurentSeries, SeriesZeroDivision, series_derivative, series_invert, series_mul, to_fraction
from .branches import BranchSystem

logger = logging.getLogger(__name__)

X, Y, T = sympy.symbols("x y t")

PlanePolynomial = Union[Poly, str]


def plane_polynomial(value: PlanePolynomial) -> Poly:
    """Exact polynomial in x, y from a Poly or text such as 'y^2 - x^3'."""
    if isinstance(value, Poly):
        return Poly(value.as_expr(), X, Y, domain=QQ)
    if not set(value) <= set("0123456789xy+-*/^() \t"):
        raise ValueError(f"Plane polynomial text may only use x, y, integers and + - * / ^ ( ): {value!r}")
    expr = parse_expr(value, local_dict={"x": X, "y": Y}, transformations=standard_transformations + (convert_xor,))
    try:
        return Poly(expr, X, Y, domain=QQ)
    except sympy.PolynomialError as e:
        raise ValueError(f"{value!r} is not a polynomial in x, y: {e}")


def _along_branch(poly: Poly, B: BranchSystem, branch: int, truncation: int) -> LaurentSeries:
    chosen = B.branches[branch]
    x_t = sum(sympy.Rational(c.numerator, c.denominator) * T ** n for n, c in enumerate(chosen.x))
    y_t = sum(sympy.Rational(c.numerator, c.denominator) * T ** n for n, c in enumerate(chosen.y))
    composed = Poly(poly.as_expr().subs({X: x_t, Y: y_t}, simultaneous=True), T, domain=QQ)
    coefficients = [to_fraction(c) for c in reversed(composed.all_coeffs())]
    return LaurentSeries.from_polynomial(coefficients, truncation)


def pullback_plane_differential(
    f_poly: PlanePolynomial,
    B: BranchSystem,
    branch: int,
    denominator: Optional[PlanePolynomial] = None,
    truncation: Optional[int] = None,
) -> LaurentSeries:
    """Coefficient of dt in the pullback of dx / (df/dy), or of dx / denominator when one is given."""
    truncation = truncation or B.truncation
    poly = plane_polynomial(f_poly)
    divisor = plane_polynomial(denominator) if denominator is not None else poly.diff(Y)
    along = _along_branch(divisor, B, branch, truncation)
    if along.is_zero:
        raise SeriesZeroDivision(f"{divisor.as_expr()} vanishes identically on branch {branch} of {B.name}")
    dx = series_derivative(B.branches[branch].x_series(truncation + 1))
    pullback = series_mul(dx, series_invert(along))
    logger.debug(f"Pullback of dx/({divisor.as_expr()}) on branch {branch} of {B.name}: {pullback}")
    return pullback
