import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..exactnum import RationalFunction, series_coeff, series_expand, to_fraction
from .kdifferential import (
    INFINITY,
    Chart,
    KDifferential,
    Location,
    PolePoint,
    PrincipalPart,
    format_location,
    location_key,
    parse_location,
)

logger = logging.getLogger(__name__)


class DuplicateLocation(ValueError):
    pass


def to_infinity_chart(eta: KDifferential) -> KDifferential:
    """g(w)(dw)^k with g(w) = f(1/w) * (-1)^k * w^(-2k). Applying it twice is the identity."""
    k = eta.k
    g = eta.f.reciprocal_substitution().times_power(-2 * k).scale((-1) ** k)
    return KDifferential(k=k, f=g, chart=eta.chart.other)


def _affine(eta: KDifferential) -> KDifferential:
    return eta if eta.chart == Chart.AFFINE else to_infinity_chart(eta)


def _local_function(eta: KDifferential, location: Location) -> Tuple[RationalFunction, Fraction]:
    """Coefficient function and center in the local coordinate at `location`."""
    eta = _affine(eta)
    if location == INFINITY:
        return to_infinity_chart(eta).f, Fraction(0)
    return eta.f, to_fraction(location)


def k_residue(eta: KDifferential, location) -> Fraction:
    """Coefficient of u^-k (du)^k at the point; u = z - p, or w = 1/z at infinity."""
    f, center = _local_function(eta, parse_location(location))
    expansion = series_expand(f, center, 1 - eta.k)
    return series_coeff(expansion, -eta.k)


def _pole_order_at_infinity(eta: KDifferential) -> int:
    g = to_infinity_chart(_affine(eta)).f
    order = 0
    for c in g.denominator_coefficients():
        if c != 0:
            break
        order += 1
    return order


def pole_points(eta: KDifferential) -> List[PolePoint]:
    """Exact poles in both charts, finite points ascending, then infinity."""
    eta = _affine(eta)
    points = [PolePoint(location=p, order=m) for p, m in eta.f.denominator_roots().items()]
    at_infinity = _pole_order_at_infinity(eta)
    if at_infinity:
        points.append(PolePoint(location=INFINITY, order=at_infinity))
    return points


def all_residues(eta: KDifferential) -> Dict[Location, Fraction]:
    """k-residues at every finite pole and at infinity.

    Infinity is always present, with value 0 when it is a regular point, so the
    mapping covers every point the residue theorem sums over.
    """
    locations = [p.location for p in pole_points(eta) if p.location != INFINITY]
    locations.append(INFINITY)
    residues = {loc: k_residue(eta, loc) for loc in sorted(locations, key=location_key)}
    logger.debug(
        f"Residues of {eta.to_text()}: "
        + ", ".join(f"{format_location(loc)}={value}" for loc, value in residues.items())
    )
    return residues


def residue_sum(eta: KDifferential) -> Fraction:
    return sum(all_residues(eta).values(), Fraction(0))


def principal_part(eta: KDifferential, location) -> Optional[PrincipalPart]:
    location = parse_location(location)
    f, center = _local_function(eta, location)
    expansion = series_expand(f, center, 0)
    if expansion.is_zero:
        return None
    order = -expansion.valuation
    coefficients = expansion.coefficient_vector(-order, 0)
    return PrincipalPart(location=location, coefficients=coefficients, order=order)


def from_principal_parts(k: int, parts: Sequence[PrincipalPart]) -> KDifferential:
    """Bare partial-fraction sum of the parts; no holomorphic correction is added."""
    seen = set()
    f = RationalFunction.zero()
    for part in parts:
        if part.location == INFINITY:
            raise ValueError("from_principal_parts takes finite locations only")
        if part.location in seen:
            raise DuplicateLocation(f"Two principal parts prescribed at z = {format_location(part.location)}")
        seen.add(part.location)
        for j in range(1, part.order + 1):
            c = part.coefficient(j)
            if c:
                f = f + RationalFunction.polar_term(c, part.location, j)
    return KDifferential(k=k, f=f)


def infinity_residue_formula_check(k: int, parts: Sequence[PrincipalPart]) -> Tuple[Fraction, Fraction]:
    """(predicted (-1)^k * sum a_i, actual k-residue at infinity) for pure order-k parts."""
    for part in parts:
        if part.order != k or not part.is_pure:
            raise ValueError(
                f"Part at {format_location(part.location)} is not a pure order-{k} part"
            )
    total = sum((part.coefficients[0] for part in parts), Fraction(0))
    predicted = (-1) ** k * total
    actual = k_residue(from_principal_parts(k, parts), INFINITY)
    if k % 2 == 0 and total != 0:
        logger.warning(
            f"W-EVEN-K-RESIDUE: k={k}, component residue sum is {total + actual}, not 0"
        )
    return predicted, actual
