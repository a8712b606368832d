import logging
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..diffcalc import KDifferential, to_infinity_chart
from ..exactnum import ConstraintSystem, RationalFunction, series_coeff, series_expand, to_fraction
from .branches import BranchSystem
from .descent import descent_columns, descent_constraints
from .ring import ConductorData, conductor_exponents

logger = logging.getLogger(__name__)


class Placement(BaseModel):
    """A singularity of a rational curve whose branch i sits at z = points[i] with parameter t_i = z - points[i]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    id: str
    system: BranchSystem
    points: Tuple[Fraction, ...]


class RationalCurveDescent(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    n_unknowns: int
    rank: int
    local_ranks: Dict[str, int]
    additive: bool = Field(..., description="Stacked local constraints have rank equal to the sum of local ranks")
    dimension: int
    arithmetic_genus: int = Field(..., description="Sum of delta_x over the placed singularities (g = 0)")
    conductors: Dict[str, ConductorData]
    basis: List[str] = Field(default_factory=list)


def rational_curve_descent(placements: Sequence[Placement]) -> RationalCurveDescent:
    """Differentials on P^1 with poles of order <= c_i at branch points, regular elsewhere including infinity,
    satisfying every local descent constraint."""
    points = [p for placement in placements for p in placement.points]
    if len(set(points)) != len(points):
        raise ValueError("Branch points of different branches must be distinct")
    conductors: Dict[str, ConductorData] = {}
    columns: List[Tuple[str, int, int]] = []
    for placement in placements:
        if len(placement.points) != placement.system.n_branches:
            raise ValueError(f"{placement.id}: {placement.system.n_branches} branches but {len(placement.points)} points")
        conductors[placement.id] = conductor_exponents(placement.system)
        columns.extend((placement.id, i, j) for i, j in descent_columns(conductors[placement.id].exponents))
    labels = [f"{s}:b{i}:t^-{j}" for s, i, j in columns]
    point_of = {(p.id, i): to_fraction(p.points[i]) for p in placements for i in range(len(p.points))}
    pieces = [
        KDifferential(k=1, f=RationalFunction.polar_term(1, point_of[(s, i)], j)) for s, i, j in columns
    ]

    rows: List[List[Fraction]] = []
    row_labels: List[str] = []
    # regular at infinity: every negative power of w vanishes
    expansions = [series_expand(to_infinity_chart(piece).f, 0, 0) for piece in pieces]
    max_order = max((-e.valuation for e in expansions if not e.is_zero), default=0)
    for n in range(1, max_order + 1):
        rows.append([series_coeff(e, -n) for e in expansions])
        row_labels.append(f"inf:w^-{n}")

    local_ranks = {}
    local_rows = []
    for placement in placements:
        system = descent_constraints(placement.system, conductors[placement.id].exponents)
        local_ranks[placement.id] = system.rank
        index = {label: n for n, label in enumerate(labels)}
        for r, row in enumerate(system.rows):
            full = [Fraction(0)] * len(columns)
            for value, name in zip(row, system.columns):
                full[index[f"{placement.id}:{name}"]] = value
            local_rows.append(full)
            row_labels.append(f"{placement.id}:descent{r}")
    rows.extend(local_rows)

    total = ConstraintSystem.from_rows(labels, rows, row_labels)
    local_only = ConstraintSystem.from_rows(labels, local_rows)
    basis_vectors = total.kernel_basis()
    basis = []
    for vector in basis_vectors:
        eta = KDifferential.zero(1)
        for piece, c in zip(pieces, vector):
            if c:
                eta = eta + piece.scale(c)
        basis.append(eta.to_text())
    result = RationalCurveDescent(
        n_unknowns=len(columns),
        rank=total.rank,
        local_ranks=local_ranks,
        additive=local_only.rank == sum(local_ranks.values()),
        dimension=len(basis_vectors),
        arithmetic_genus=sum(c.delta for c in conductors.values()),
        conductors=conductors,
        basis=basis,
    )
    logger.info(
        f"Rational curve with {len(placements)} singularities: dimension {result.dimension}, "
        f"p_a {result.arithmetic_genus}"
    )
    return result
