import logging
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from ..curvegraph import (
    DualGraph,
    Side,
    betti1,
    ensure_connected,
    ensure_rational,
    residue_data_dimension,
)
from ..diffcalc import INFINITY, KDifferential, k_residue
from ..exactnum import ConstraintSystem, RationalFunction, kernel, matrix_rank
from .models import DimensionReport, GlobalKDifferential, ResidueMatrix, SpanReport

logger = logging.getLogger(__name__)


class _PoleAnsatz:
    """Unknown a_j of dz/(z - p_j) for every finite node slot; columns ordered by component then slot key."""

    def __init__(self, G: DualGraph):
        self.G = G
        self.columns: List[Tuple[str, str]] = []
        self.pieces: List[KDifferential] = []
        for component in G.components:
            for key, location in sorted(component.node_slots.items()):
                if location == INFINITY:
                    continue
                self.columns.append((component.id, key))
                self.pieces.append(KDifferential(k=1, f=RationalFunction.polar_term(1, location, 1)))

    @property
    def labels(self) -> List[str]:
        return [f"{c}:{key}" for c, key in self.columns]

    def residue_row(self, component_id: str, location) -> List[Fraction]:
        return [
            k_residue(piece, location) if c == component_id else Fraction(0)
            for (c, _), piece in zip(self.columns, self.pieces)
        ]

    def regularity_rows(self) -> Tuple[List[List[Fraction]], List[str]]:
        """Residue at infinity vanishes on components whose infinity is not a node slot."""
        rows, labels = [], []
        for component in self.G.components:
            if INFINITY in component.node_slots.values():
                continue
            rows.append(self.residue_row(component.id, INFINITY))
            labels.append(f"{component.id}:regular-at-inf")
        return rows, labels

    def paired_rows(self) -> Tuple[List[List[Fraction]], List[str]]:
        """Res_{q+} + Res_{q-} per edge."""
        rows, labels = [], []
        for edge in self.G.edges:
            plus = self.residue_row(edge.plus, self.G.slot_of(edge, Side.PLUS))
            minus = self.residue_row(edge.minus, self.G.slot_of(edge, Side.MINUS))
            rows.append([a + b for a, b in zip(plus, minus)])
            labels.append(f"{edge.id}:balanced")
        return rows, labels

    def assemble(self, vector: Sequence[Fraction]) -> GlobalKDifferential:
        pieces: Dict[str, KDifferential] = {c.id: KDifferential.zero(1) for c in self.G.components}
        for (component_id, _), piece, coefficient in zip(self.columns, self.pieces, vector):
            if coefficient:
                pieces[component_id] = pieces[component_id] + piece.scale(coefficient)
        return GlobalKDifferential(k=1, pieces=pieces)


def _prepare(G: DualGraph, k: int) -> _PoleAnsatz:
    ensure_connected(G)
    ensure_rational(G)
    if k != 1:
        raise ValueError("Section spaces are computed for k = 1 only")
    return _PoleAnsatz(G)


def node_supported_space(G: DualGraph, k: int = 1) -> List[GlobalKDifferential]:
    """Differentials with at most simple poles at node slots, regular elsewhere, no balancing."""
    ansatz = _prepare(G, k)
    rows, labels = ansatz.regularity_rows()
    system = ConstraintSystem.from_rows(ansatz.labels, rows, labels)
    return [ansatz.assemble(v) for v in system.kernel_basis()]


def dualizing_section_space(G: DualGraph, k: int = 1) -> List[GlobalKDifferential]:
    ansatz = _prepare(G, k)
    rows, labels = ansatz.regularity_rows()
    paired, paired_labels = ansatz.paired_rows()
    system = ConstraintSystem.from_rows(ansatz.labels, rows + paired, labels + paired_labels)
    basis = [ansatz.assemble(v) for v in system.kernel_basis()]
    logger.info(f"Dualizing sections: {len(ansatz.labels)} unknowns, rank {system.rank}, dimension {len(basis)}")
    return basis


def residue_matrix(G: DualGraph, basis: Sequence[GlobalKDifferential]) -> ResidueMatrix:
    rows = tuple(
        tuple(k_residue(element.pieces[edge.plus], G.slot_of(edge, Side.PLUS)) for element in basis)
        for edge in G.edges
    )
    return ResidueMatrix(edge_ids=tuple(G.edge_ids), n_columns=len(basis), rows=rows)


def span_report(M: ResidueMatrix, g: int, delta: int) -> SpanReport:
    rank = matrix_rank(M.rows, M.n_columns)
    injective = rank == M.n_columns
    return SpanReport(
        rank=rank,
        n_columns=M.n_columns,
        injective=injective,
        spans_dual=injective,
        delta=delta,
        genus=g,
        delta_at_least_genus=delta >= g,
    )


def equisingular_kernel(M: ResidueMatrix) -> List[Tuple[Fraction, ...]]:
    if M.n_columns == 0:
        return []
    return kernel(M.rows, M.n_columns)


def dimension_report(G: DualGraph) -> DimensionReport:
    ansatz = _prepare(G, 1)
    regularity, regularity_labels = ansatz.regularity_rows()
    vd_system = ConstraintSystem.from_rows(ansatz.labels, regularity, regularity_labels)
    vd_basis = vd_system.kernel_basis()
    paired, _ = ansatz.paired_rows()
    # paired residue map restricted to VD, in VD-basis coordinates
    paired_on_vd = [
        [sum((r * v for r, v in zip(row, vector)), Fraction(0)) for vector in vd_basis] for row in paired
    ]
    h_vd = len(vd_basis)
    im_res_dim = matrix_rank(paired_on_vd, h_vd) if h_vd else 0
    w_basis = dualizing_section_space(G)
    h_w = len(w_basis)
    delta = len(G.edges)
    kernel_on_w = len(equisingular_kernel(residue_matrix(G, w_basis)))
    report = DimensionReport(
        h_vd=h_vd,
        h_w=h_w,
        n_constraints_independent=h_vd - h_w,
        im_res_dim=im_res_dim,
        delta=delta,
        sum_delta_x=delta,
        delta_minus_one=max(delta - 1, 0),
        betti1=betti1(G),
        residue_data_dimension=residue_data_dimension(G),
        kernel_on_vd_dim=h_vd - im_res_dim,
        kernel_on_w_dim=kernel_on_w,
    )
    if report.n_constraints_independent != report.sum_delta_x:
        report.warnings.append("W-CONDUCTOR-COUNT")
        logger.warning(
            f"W-CONDUCTOR-COUNT: {report.n_constraints_independent} independent node constraints, "
            f"sum of delta_x is {report.sum_delta_x}"
        )
    if report.kernel_on_vd_dim != report.kernel_on_w_dim:
        report.warnings.append("W-RES-KERNEL")
        logger.warning(
            f"W-RES-KERNEL: kernel of Res is {report.kernel_on_vd_dim}-dimensional on VD, "
            f"{report.kernel_on_w_dim}-dimensional on W"
        )
    return report


def describe_basis(G: DualGraph, basis: Sequence[GlobalKDifferential]) -> List[Dict[str, str]]:
    return [{c.id: element.pieces[c.id].to_text() for c in G.components} for element in basis]
