import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..exactnum import (
    ConstraintSystem,
    LaurentSeries,
    format_rational,
    series_invert,
    series_mul,
    series_pow,
    to_fraction,
)
from .branches import BranchSystem
from .ring import ConductorData, TruncationTooSmall, conductor_exponents, local_ring_model

logger = logging.getLogger(__name__)


class NotGorensteinDetected(ValueError):
    pass


class PrincipalPartSystem(BaseModel):
    """tails[i][0] multiplies t_i^-m (dt_i)^k with m = len(tails[i]); the last entry is the t_i^-1 coefficient."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: int = Field(default=1, ge=1)
    tails: Dict[int, Tuple[Fraction, ...]] = Field(default_factory=dict)

    @field_validator("tails", mode="before")
    @classmethod
    def _coerce(cls, value):
        return {int(i): tuple(to_fraction(c) for c in tail) for i, tail in dict(value).items()}

    @classmethod
    def from_terms(cls, terms: Dict[int, Dict[int, object]], k: int = 1) -> "PrincipalPartSystem":
        """terms[i][j] is the coefficient of t_i^-j."""
        tails = {}
        for i, by_order in terms.items():
            order = max((j for j, c in by_order.items() if to_fraction(c) != 0), default=0)
            tails[i] = tuple(to_fraction(by_order.get(j, 0)) for j in range(order, 0, -1))
        return cls(k=k, tails=tails)

    def coefficient(self, branch: int, j: int) -> Fraction:
        tail = self.tails.get(branch, ())
        index = len(tail) - j
        return tail[index] if 0 <= index < len(tail) else Fraction(0)

    def pole_order(self, branch: int) -> int:
        tail = self.tails.get(branch, ())
        for index, c in enumerate(tail):
            if c != 0:
                return len(tail) - index
        return 0

    def residue(self, branch: int) -> Fraction:
        return self.coefficient(branch, self.k)

    def to_series(self, n_branches: int, truncation: int) -> List[LaurentSeries]:
        return [
            LaurentSeries.from_terms(
                {-j: self.coefficient(i, j) for j in range(1, self.pole_order(i) + 1)}, truncation
            )
            for i in range(n_branches)
        ]

    def describe(self) -> Dict[int, str]:
        rendered = {}
        for branch in sorted(self.tails):
            terms = [
                f"{format_rational(self.coefficient(branch, j))}*t{branch}^-{j}"
                for j in range(self.pole_order(branch), 0, -1)
                if self.coefficient(branch, j) != 0
            ]
            rendered[branch] = (" + ".join(terms) or "0") + (f" (dt{branch})^{self.k}" if self.k > 1 else f" dt{branch}")
        return rendered


def descent_columns(max_orders: Sequence[int]) -> List[Tuple[int, int]]:
    return [(i, j) for i, m in enumerate(max_orders) for j in range(m, 0, -1)]


def descent_constraints(
    B: BranchSystem, max_orders: Sequence[int], truncation: Optional[int] = None
) -> ConstraintSystem:
    """Sum_i Res_{t_i}(f * eta) = 0 for every f in the local ring, as rows on the polar coefficients (k = 1)."""
    if len(max_orders) != B.n_branches:
        raise ValueError(f"{B.name} has {B.n_branches} branches, got {len(max_orders)} pole bounds")
    truncation = truncation or B.truncation
    if truncation < max(max_orders, default=0):
        raise TruncationTooSmall(f"N={truncation} is below the pole bound {max(max_orders)}")
    model = local_ring_model(B, truncation)
    columns = descent_columns(max_orders)
    rows = []
    for f in model.basis_vectors:
        # Res_{t_i}(f_i * t_i^-j dt_i) is the t_i^(j-1) coefficient of f_i
        row = [f[i * truncation + j - 1] for i, j in columns]
        if any(row):
            rows.append(row)
    system = ConstraintSystem.from_rows([f"b{i}:t^-{j}" for i, j in columns], rows).reduced()
    logger.debug(f"{B.name}: descent constraints at orders {tuple(max_orders)} have rank {system.rank}")
    return system


def coefficient_vector(eta: PrincipalPartSystem, max_orders: Sequence[int]) -> List[Fraction]:
    return [eta.coefficient(i, j) for i, j in descent_columns(max_orders)]


class DescentVerdict(BaseModel):
    descends: bool
    max_orders: Tuple[int, ...]
    violations: List[str] = Field(default_factory=list)


def descends(B: BranchSystem, eta: PrincipalPartSystem, conductor: Optional[ConductorData] = None) -> DescentVerdict:
    """Residue-pairing verdict at k = 1, with pole bounds max(c_i, pole order of eta on branch i)."""
    if eta.k != 1:
        raise ValueError("The residue-pairing oracle is a k = 1 test; use descends_k for k >= 2")
    conductor = conductor or conductor_exponents(B)
    max_orders = tuple(max(c, eta.pole_order(i)) for i, c in enumerate(conductor.exponents))
    system = descent_constraints(B, max_orders)
    values = system.evaluate(coefficient_vector(eta, max_orders))
    violations = [
        " + ".join(f"{format_rational(c)}*{name}" for c, name in zip(row, system.columns) if c) + f" = {format_rational(v)}"
        for row, v in zip(system.rows, values)
        if v != 0
    ]
    return DescentVerdict(descends=not violations, max_orders=max_orders, violations=violations)


class ConstraintCount(BaseModel):
    rank: int
    delta: int
    equal: bool


def constraint_count_equals_delta(B: BranchSystem, conductor: Optional[ConductorData] = None) -> ConstraintCount:
    conductor = conductor or conductor_exponents(B)
    rank = descent_constraints(B, conductor.exponents).rank
    return ConstraintCount(rank=rank, delta=conductor.delta, equal=rank == conductor.delta)


def conductor_annihilation_check(
    B: BranchSystem, eta: PrincipalPartSystem, conductor: Optional[ConductorData] = None
) -> bool:
    """t_i^{c_i} * eta_i is regular on every branch. Necessary for descent, not sufficient."""
    conductor = conductor or conductor_exponents(B)
    return all(c >= eta.pole_order(i) for i, c in enumerate(conductor.exponents))


def weighted_residue_check(
    B: BranchSystem, eta: PrincipalPartSystem, conductor: Optional[ConductorData] = None
) -> Fraction:
    conductor = conductor or conductor_exponents(B)
    return sum((c * eta.residue(i) for i, c in enumerate(conductor.exponents)), Fraction(0))


def dualizing_generator(B: BranchSystem, conductor: Optional[ConductorData] = None) -> PrincipalPartSystem:
    """Element of the descent space with pole order exactly c_i on every branch, branch 0 top coefficient 1."""
    conductor = conductor or conductor_exponents(B)
    orders = conductor.exponents
    if min(orders) == 0:
        raise NotGorensteinDetected(f"{B.name} has a branch with conductor exponent 0; the point is smooth there")
    system = descent_constraints(B, orders)
    columns = descent_columns(orders)
    top = [columns.index((i, c)) for i, c in enumerate(orders)]
    basis = system.kernel_basis()
    projections = [[vector[t] for t in top] for vector in basis]
    top_rank = ConstraintSystem.from_rows([f"b{i}" for i in range(len(orders))], projections).rank if projections else 0
    if top_rank != 1:
        raise NotGorensteinDetected(f"{B.name}: top-order descent space has dimension {top_rank}, not 1")
    chosen = next(v for v, p in zip(basis, projections) if any(p))
    lead = [chosen[t] for t in top]
    if any(c == 0 for c in lead):
        raise NotGorensteinDetected(f"{B.name}: no descending element reaches order c_i on every branch")
    scale = 1 / lead[0]
    terms = {i: {} for i in range(len(orders))}
    for (i, j), value in zip(columns, chosen):
        terms[i][j] = value * scale
    return PrincipalPartSystem.from_terms(terms, k=1)



def descends_k(
    B: BranchSystem,
    eta: Sequence[LaurentSeries],
    k: int,
    conductor: Optional[ConductorData] = None,
) -> bool:
    """eta_i = h_i * tau_i^k with h in the local ring, tau the dualizing generator."""
    conductor = conductor or conductor_exponents(B)
    generator = dualizing_generator(B, conductor)
    if len(eta) != B.n_branches:
        raise ValueError(f"{B.name} has {B.n_branches} branches, got {len(eta)} series")
    N = B.truncation
    working = N + 2 * k * max(conductor.exponents) + 8
    tau = generator.to_series(B.n_branches, working)
    model = local_ring_model(B, N)
    quotients = []
    for eta_i, tau_i in zip(eta, tau):
        h = series_mul(eta_i, series_invert(series_pow(tau_i, k)))
        if h.truncation_order < N:
            raise TruncationTooSmall(
                f"{B.name}: eta/tau^{k} known below t^{h.truncation_order}, membership needs t^{N}"
            )
        if not h.is_zero and h.valuation < 0:
            logger.debug(f"{B.name}: eta/tau^{k} has a pole of order {-h.valuation}")
            return False
        quotients.append(h.truncated(N))
    return model.contains_series(quotients)


class DimensionIdentity(BaseModel):
    total_degrees_of_freedom: int
    rank: int
    descending_dimension: int
    delta: int
    exact: bool = Field(..., description="rank equals delta")
    symmetric: bool = Field(..., description="sum of c_i equals 2 * delta")


def descent_dimension_identity(B: BranchSystem, conductor: Optional[ConductorData] = None) -> DimensionIdentity:
    conductor = conductor or conductor_exponents(B)
    total = sum(conductor.exponents)
    system = descent_constraints(B, conductor.exponents)
    descending = len(system.kernel_basis())
    return DimensionIdentity(
        total_degrees_of_freedom=total,
        rank=system.rank,
        descending_dimension=descending,
        delta=conductor.delta,
        exact=system.rank == conductor.delta,
        symmetric=total == 2 * conductor.delta,
    )
