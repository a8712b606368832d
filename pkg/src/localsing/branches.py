import logging
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..exactnum import LaurentSeries, RationalFunction, format_rational, to_fraction

logger = logging.getLogger(__name__)

DEFAULT_TRUNCATION = 16


class BranchParametrizationError(ValueError):
    pass


def _strip(coefficients: Iterable) -> Tuple[Fraction, ...]:
    coefficients = [to_fraction(c) for c in coefficients]
    while coefficients and coefficients[-1] == 0:
        coefficients.pop()
    return tuple(coefficients)


def _render(coefficients: Sequence[Fraction], variable: str) -> str:
    terms = []
    for n, c in enumerate(coefficients):
        if c == 0:
            continue
        if n == 0:
            terms.append(format_rational(c))
            continue
        power = variable if n == 1 else f"{variable}^{n}"
        prefix = "" if c == 1 else ("-" if c == -1 else f"{format_rational(c)}*")
        terms.append(prefix + power)
    return " + ".join(terms) or "0"


class Branch(BaseModel):
    """t -> (x(t), y(t)) with x, y exact polynomials vanishing at t = 0; coefficients run from t^0 upwards."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: Tuple[Fraction, ...] = Field(default=())
    y: Tuple[Fraction, ...] = Field(default=())

    @field_validator("x", "y", mode="before")
    @classmethod
    def _coerce(cls, value):
        return _strip(value)

    @model_validator(mode="after")
    def _check(self) -> "Branch":
        if (self.x and self.x[0] != 0) or (self.y and self.y[0] != 0):
            raise BranchParametrizationError("Branch parametrization must pass through the origin at t = 0")
        support = [n for n, c in enumerate(self.x) if c] + [n for n, c in enumerate(self.y) if c]
        if not support:
            raise BranchParametrizationError("Branch parametrization is identically zero")
        if reduce(gcd, support) != 1:
            raise BranchParametrizationError(
                f"Parametrization ({self.describe()}) is a power reparametrization; "
                f"exponent gcd is {reduce(gcd, support)}"
            )
        return self

    @classmethod
    def from_text(cls, x: str, y: str, variable: str = "t") -> "Branch":
        def coefficients(text: str) -> List[Fraction]:
            function = RationalFunction.from_text(text, variable)
            if not function.is_polynomial:
                raise BranchParametrizationError(f"Branch coordinate {text!r} must be a polynomial in {variable}")
            return function.numerator_coefficients()

        return cls(x=coefficients(x), y=coefficients(y))

    def x_series(self, truncation: int) -> LaurentSeries:
        return LaurentSeries.from_polynomial(self.x, truncation)

    def y_series(self, truncation: int) -> LaurentSeries:
        return LaurentSeries.from_polynomial(self.y, truncation)

    def describe(self, variable: str = "t") -> str:
        return f"x = {_render(self.x, variable)}, y = {_render(self.y, variable)}"


class BranchSystem(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = Field(default="custom")
    branches: Tuple[Branch, ...] = Field(..., min_length=1)
    truncation: int = Field(default=DEFAULT_TRUNCATION, ge=2, description="Shared truncation N")

    @model_validator(mode="after")
    def _distinct(self) -> "BranchSystem":
        seen = set()
        for branch in self.branches:
            key = (branch.x[: self.truncation], branch.y[: self.truncation])
            if key in seen:
                raise BranchParametrizationError(f"Repeated branch {branch.describe()} in {self.name}")
            seen.add(key)
        return self

    @property
    def n_branches(self) -> int:
        return len(self.branches)

    def with_truncation(self, truncation: int) -> "BranchSystem":
        return BranchSystem(name=self.name, branches=self.branches, truncation=truncation)


CATALOG: Dict[str, Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]] = {
    "node": (((0, 1), ()), ((), (0, 1))),
    "cusp": (((0, 0, 1), (0, 0, 0, 1)),),
    "tacnode": (((0, 1), (0, 0, 1)), ((0, 1), (0, 0, -1))),
    "triple_point": (((0, 1), ()), ((), (0, 1)), ((0, 1), (0, 1))),
    "ramphoid_cusp": (((0, 0, 1), (0, 0, 0, 0, 0, 1)),),
    "e6": (((0, 0, 0, 1), (0, 0, 0, 0, 1)),),
}


def catalog_names() -> List[str]:
    return sorted(CATALOG)


def catalog(name: str, truncation: Optional[int] = None) -> BranchSystem:
    if name not in CATALOG:
        raise KeyError(f"Unknown singularity {name!r}; catalog has {catalog_names()}")
    branches = tuple(Branch(x=x, y=y) for x, y in CATALOG[name])
    return BranchSystem(name=name, branches=branches, truncation=truncation or DEFAULT_TRUNCATION)


def custom(branches: Sequence[Tuple[str, str]], truncation: Optional[int] = None, name: str = "custom") -> BranchSystem:
    parsed = tuple(Branch.from_text(x, y) for x, y in branches)
    return BranchSystem(name=name, branches=parsed, truncation=truncation or DEFAULT_TRUNCATION)
