# Exact arithmetic substrate: rationals, truncated Laurent series, rational functions, linear constraints
from .constraints import ConstraintSystem, kernel, matrix_rank, transpose
from .ratfunc import IrrationalPole, RationalFunction
from .rational import Rational, format_rational, parse_rational, random_rational, to_fraction
from .series import (
    LaurentSeries,
    QueryBeyondTruncation,
    SeriesZeroDivision,
    default_truncation,
    series_add,
    series_coeff,
    series_compose_power,
    series_derivative,
    series_expand,
    series_invert,
    series_mul,
    series_pow,
    series_scale,
    series_shift,
)
