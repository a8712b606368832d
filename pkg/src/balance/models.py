from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..diffcalc import KDifferential


class IncompleteDifferential(ValueError):
    pass


class GlobalKDifferential(BaseModel):
    """One k-differential per rational component."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: int = Field(..., ge=1)
    pieces: Dict[str, KDifferential] = Field(default_factory=dict, description="Component id -> eta_v")

    @model_validator(mode="after")
    def _uniform_k(self) -> "GlobalKDifferential":
        for component_id, piece in self.pieces.items():
            if piece.k != self.k:
                raise ValueError(f"Piece on {component_id} has k={piece.k}, expected {self.k}")
        return self

    def __add__(self, other: "GlobalKDifferential") -> "GlobalKDifferential":
        if self.k != other.k:
            raise ValueError("Cannot add global differentials of different k")
        pieces = dict(self.pieces)
        for component_id, piece in other.pieces.items():
            pieces[component_id] = pieces[component_id] + piece if component_id in pieces else piece
        return GlobalKDifferential(k=self.k, pieces=pieces)

    def scale(self, factor) -> "GlobalKDifferential":
        return GlobalKDifferential(k=self.k, pieces={c: p.scale(factor) for c, p in self.pieces.items()})

    @property
    def is_zero(self) -> bool:
        return all(piece.is_zero for piece in self.pieces.values())


class EdgeResidue(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    edge_id: str
    res_plus: Fraction
    res_minus: Fraction

    @property
    def sum(self) -> Fraction:
        return self.res_plus + self.res_minus


class EdgeResidueReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: int
    edges: Tuple[EdgeResidue, ...] = Field(..., description="Sorted by edge id")
    component_sums: Dict[str, Fraction] = Field(..., description="Sum of all residues of eta_v, infinity included")
    skipped_components: Tuple[str, ...] = Field(default=(), description="Positive-genus components left out")
    skipped_edges: Tuple[str, ...] = Field(default=())

    @property
    def local_ok(self) -> bool:
        return all(edge.sum == 0 for edge in self.edges)

    @property
    def global_ok(self) -> bool:
        return all(total == 0 for total in self.component_sums.values())

    @property
    def unbalanced_edges(self) -> List[EdgeResidue]:
        return [edge for edge in self.edges if edge.sum != 0]


class ResidueMatrix(BaseModel):
    """Rows are edges in id order, columns are basis elements; entry = residue at the + branch."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    edge_ids: Tuple[str, ...]
    n_columns: int = Field(..., ge=0)
    rows: Tuple[Tuple[Fraction, ...], ...]

    @model_validator(mode="after")
    def _shape(self) -> "ResidueMatrix":
        if len(self.rows) != len(self.edge_ids) or any(len(r) != self.n_columns for r in self.rows):
            raise ValueError("Residue matrix shape does not match its labels")
        return self


class SpanReport(BaseModel):
    rank: int
    n_columns: int
    injective: bool
    spans_dual: bool
    delta: int
    genus: int
    delta_at_least_genus: bool


class PerturbationResult(BaseModel):
    component: str
    edges: Tuple[str, str]
    local_ok: bool
    global_ok: bool


class ProbeVerdict(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: int
    trials: int
    seed: int
    asserted: bool = Field(..., description="local_ok => global_ok is asserted only at k = 1")
    holds: Optional[bool] = Field(default=None, description="local_ok <=> global_ok in every trial, reported at k = 1")
    implication_holds: Optional[bool] = None
    local_ok_count: int = 0
    global_ok_count: int = 0
    mismatch_count: int = 0
    counterexample: Optional[Dict[str, Fraction]] = Field(default=None, description="Slot coefficients of the first mismatch")
    counterexample_trial: Optional[int] = None
    perturbation: Optional[PerturbationResult] = None
    warnings: List[str] = Field(default_factory=list)


class DimensionReport(BaseModel):
    h_vd: int = Field(..., description="Simple poles at node slots, regular elsewhere, no balancing")
    h_w: int = Field(..., description="Dualizing sections")
    n_constraints_independent: int
    im_res_dim: int
    delta: int
    sum_delta_x: int
    delta_minus_one: int
    betti1: int
    residue_data_dimension: int
    kernel_on_vd_dim: int = Field(..., description="Kernel of the paired residue map on VD; equals h_w")
    kernel_on_w_dim: int = Field(..., description="Kernel of Res restricted to W")
    warnings: List[str] = Field(default_factory=list)
