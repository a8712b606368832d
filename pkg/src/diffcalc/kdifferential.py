from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..exactnum import RationalFunction, format_rational, to_fraction


class Infinity(str, Enum):
    INFINITY = "inf"


INFINITY = Infinity.INFINITY

Location = Union[Fraction, Infinity]


def parse_location(value) -> Location:
    if value == INFINITY or (isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "∞")):
        return INFINITY
    return to_fraction(value)


def format_location(location: Location) -> str:
    return "inf" if location == INFINITY else format_rational(location)


def location_key(location: Location) -> Tuple[int, Fraction]:
    """Finite points in increasing order, then infinity."""
    return (1, Fraction(0)) if location == INFINITY else (0, location)


class Chart(str, Enum):
    AFFINE = "affine"
    INFINITY = "infinity"

    @property
    def other(self) -> "Chart":
        return Chart.INFINITY if self == Chart.AFFINE else Chart.AFFINE


class KDifferential(BaseModel):
    """f(z) (dz)^k in the chart named by `chart`; the other chart is always derived."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: int = Field(..., ge=1, description="Tensor power")
    f: RationalFunction = Field(..., description="Coefficient function in lowest terms")
    chart: Chart = Field(default=Chart.AFFINE, description="Affine chart z, or w = 1/z")

    @classmethod
    def from_text(cls, k: int, text: str, variable: str = "z") -> "KDifferential":
        return cls(k=k, f=RationalFunction.from_text(text, variable))

    @classmethod
    def zero(cls, k: int) -> "KDifferential":
        return cls(k=k, f=RationalFunction.zero())

    @property
    def is_zero(self) -> bool:
        return self.f.is_zero

    def _check_compatible(self, other: "KDifferential") -> None:
        if self.k != other.k or self.chart != other.chart:
            raise ValueError(
                f"Cannot combine a {self.k}-differential in the {self.chart.value} chart "
                f"with a {other.k}-differential in the {other.chart.value} chart"
            )

    def __add__(self, other: "KDifferential") -> "KDifferential":
        self._check_compatible(other)
        return KDifferential(k=self.k, f=self.f + other.f, chart=self.chart)

    def scale(self, factor) -> "KDifferential":
        return KDifferential(k=self.k, f=self.f.scale(factor), chart=self.chart)

    def to_text(self, variable: Optional[str] = None) -> str:
        variable = variable or ("z" if self.chart == Chart.AFFINE else "w")
        power = f"(d{variable})" if self.k == 1 else f"(d{variable})^{self.k}"
        return f"{self.f.to_text(variable)} * {power}"


class PolePoint(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("location", mode="before")
    @classmethod
    def _coerce_location(cls, value):
        return parse_location(value)

    location: Location = Field(..., description="Finite point of the stored chart, or infinity")
    order: int = Field(..., ge=1, description="Pole order in the local coordinate")


class PrincipalPart(BaseModel):
    """coefficients[i] multiplies (z - location)^-(order - i) (dz)^k; omitted lower terms are zero."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    location: Location = Field(..., description="Pole location")
    coefficients: Tuple[Fraction, ...] = Field(..., min_length=1, description="Leading coefficient first")
    order: int = Field(..., ge=1, description="Pole order; defaults to len(coefficients)")

    @model_validator(mode="before")
    @classmethod
    def _coerce(cls, data):
        if isinstance(data, dict):
            data = dict(data)
            data["location"] = parse_location(data["location"])
            data["coefficients"] = tuple(to_fraction(c) for c in data.get("coefficients", ()))
            if not data.get("order"):
                data["order"] = len(data["coefficients"])
        return data

    @model_validator(mode="after")
    def _check_shape(self) -> "PrincipalPart":
        if self.coefficients[0] == 0:
            raise ValueError("Leading principal-part coefficient must be nonzero")
        if len(self.coefficients) > self.order:
            raise ValueError(f"{len(self.coefficients)} coefficients do not fit a pole of order {self.order}")
        return self

    @classmethod
    def pure(cls, location: Location, coefficient, order: int) -> "PrincipalPart":
        return cls(location=location, coefficients=(to_fraction(coefficient),), order=order)

    def coefficient(self, j: int) -> Fraction:
        """Coefficient of (z - location)^-j."""
        index = self.order - j
        if 0 <= index < len(self.coefficients):
            return self.coefficients[index]
        return Fraction(0)

    @property
    def is_pure(self) -> bool:
        return all(c == 0 for c in self.coefficients[1:])
