import logging
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..exactnum import ConstraintSystem, LaurentSeries, series_mul
from .branches import Branch, BranchSystem

logger = logging.getLogger(__name__)


class TruncationTooSmall(ArithmeticError):
    pass


def column_labels(n_branches: int, truncation: int) -> List[str]:
    return [f"b{i}:t^{n}" for i in range(n_branches) for n in range(truncation)]


class LocalRingModel(BaseModel):
    """Image of O_{C,x} in the product of k[[t_i]]/t_i^N, row-reduced."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    truncation: int
    n_branches: int
    generating_monomials: Tuple[Tuple[int, int], ...]
    system: ConstraintSystem = Field(..., description="Rows span the model")

    @property
    def basis_vectors(self) -> Tuple[Tuple[Fraction, ...], ...]:
        return self.system.rref_rows

    @property
    def rank(self) -> int:
        return self.system.rank

    @property
    def codimension(self) -> int:
        return self.n_branches * self.truncation - self.rank

    def vector(self, series: Sequence[LaurentSeries]) -> Tuple[Fraction, ...]:
        """Concatenated t^0..t^{N-1} coefficients of one series per branch."""
        if len(series) != self.n_branches:
            raise ValueError(f"Expected {self.n_branches} branch series, got {len(series)}")
        for s in series:
            if not s.is_zero and s.valuation < 0:
                raise ValueError("Local ring membership takes series without poles")
            if s.truncation_order < self.truncation:
                raise TruncationTooSmall(
                    f"Series known below t^{s.truncation_order}, model needs t^{self.truncation}"
                )
        return tuple(c for s in series for c in s.coefficient_vector(0, self.truncation))

    def indicator(self, branch: int, exponent: int) -> Tuple[Fraction, ...]:
        """t_branch^exponent on one branch, zero on the others."""
        vector = [Fraction(0)] * (self.n_branches * self.truncation)
        if exponent < self.truncation:
            vector[branch * self.truncation + exponent] = Fraction(1)
        return tuple(vector)

    def contains(self, vector: Sequence[Fraction]) -> bool:
        return self.system.contains(vector)

    def contains_series(self, series: Sequence[LaurentSeries]) -> bool:
        return self.contains(self.vector(series))


def _powers(series: LaurentSeries, count: int, truncation: int) -> List[LaurentSeries]:
    powers = [LaurentSeries.from_polynomial([1], truncation)]
    for _ in range(1, count):
        powers.append(series_mul(powers[-1], series))
    return powers


@lru_cache(maxsize=128)
def _model(branches: Tuple[Branch, ...], truncation: int) -> LocalRingModel:
    monomials = [(a, b) for a in range(truncation) for b in range(truncation - a)]
    per_branch = []
    for branch in branches:
        xs = _powers(branch.x_series(truncation), truncation, truncation)
        ys = _powers(branch.y_series(truncation), truncation, truncation)
        per_branch.append((xs, ys))
    rows, used = [], []
    for a, b in monomials:
        row = []
        for xs, ys in per_branch:
            row.extend(series_mul(xs[a], ys[b]).coefficient_vector(0, truncation))
        if any(row):
            rows.append(row)
            used.append((a, b))
    system = ConstraintSystem.from_rows(column_labels(len(branches), truncation), rows, [f"x^{a}y^{b}" for a, b in used])
    reduced = system.reduced()
    logger.debug(f"Local ring model at N={truncation}: {len(used)} monomials, rank {reduced.rank}")
    return LocalRingModel(
        truncation=truncation,
        n_branches=len(branches),
        generating_monomials=tuple(used),
        system=reduced,
    )


def local_ring_model(B: BranchSystem, truncation: Optional[int] = None) -> LocalRingModel:
    """Raises TruncationTooSmall when some branch indicator t_i^{N-1} is still outside the model."""
    truncation = truncation or B.truncation
    model = _model(B.branches, truncation)
    for i in range(B.n_branches):
        if not model.contains(model.indicator(i, truncation - 1)):
            raise TruncationTooSmall(
                f"{B.name}: local ring model has not saturated at N={truncation}; raise --trunc"
            )
    return model


class ConductorData(BaseModel):
    exponents: Tuple[int, ...]
    delta: int
    truncation: int


def _conductor_at(B: BranchSystem, truncation: int) -> ConductorData:
    model = local_ring_model(B, truncation)
    exponents = []
    for i in range(B.n_branches):
        c = truncation - 1
        while c > 0 and model.contains(model.indicator(i, c - 1)):
            c -= 1
        exponents.append(c)
    return ConductorData(exponents=tuple(exponents), delta=model.codimension, truncation=truncation)


def conductor_exponents(B: BranchSystem, stability_step: int = 4) -> ConductorData:
    """Minimal c_i with t_i^n on branch i in the model for every n >= c_i, and delta = codimension.

    The computation is repeated at N + stability_step and must agree.
    """
    first = _conductor_at(B, B.truncation)
    second = _conductor_at(B, B.truncation + stability_step)
    if (first.exponents, first.delta) != (second.exponents, second.delta):
        raise TruncationTooSmall(
            f"{B.name}: conductor {first.exponents}/delta {first.delta} at N={B.truncation} changed to "
            f"{second.exponents}/delta {second.delta} at N={B.truncation + stability_step}; raise --trunc"
        )
    if B.truncation < 2 * max(first.exponents) + 2:
        raise TruncationTooSmall(
            f"{B.name}: N={B.truncation} is below 2 * max conductor exponent + 2 = {2 * max(first.exponents) + 2}"
        )
    logger.info(f"{B.name}: conductor exponents {first.exponents}, delta {first.delta}")
    return first
