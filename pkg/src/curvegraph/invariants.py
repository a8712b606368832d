from fractions import Fraction
from typing import List, Sequence

from ..exactnum import ConstraintSystem
from .graph import ensure_connected
from .models import DualGraph, Flow


def betti1(G: DualGraph) -> int:
    ensure_connected(G)
    return len(G.edges) - len(G.components) + 1


def normalization_genus(G: DualGraph) -> int:
    return sum(c.genus for c in G.components)


def arithmetic_genus(G: DualGraph) -> int:
    return normalization_genus(G) + betti1(G)


def arithmetic_genus_from_delta(g: int, deltas: Sequence[int]) -> int:
    if g < 0 or any(d < 1 for d in deltas):
        raise ValueError("Genus must be non-negative and every delta positive")
    return g + sum(deltas)


def residue_data_dimension(G: DualGraph) -> int:
    """g(C^nu) + b1(Gamma); reported for positive-genus components as well."""
    return normalization_genus(G) + betti1(G)


def vertex_balance_matrix(G: DualGraph) -> ConstraintSystem:
    ensure_connected(G)
    rows = [[G.epsilon(v, e) for e in G.edges] for v in G.vertex_ids]
    return ConstraintSystem.from_rows(G.edge_ids, rows, labels=G.vertex_ids)


def harmonic_space(G: DualGraph) -> List[Flow]:
    system = vertex_balance_matrix(G)
    return [Flow(values=dict(zip(G.edge_ids, vector))) for vector in system.kernel_basis()]


def tropical_jacobian_dim(G: DualGraph) -> int:
    return betti1(G)


def is_harmonic(G: DualGraph, flow: Flow) -> bool:
    return vertex_balance_matrix(G).is_satisfied([flow.values.get(e, Fraction(0)) for e in G.edge_ids])
