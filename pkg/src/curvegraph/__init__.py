# Dual graphs of nodal curves, combinatorial invariants, harmonic flows
from . import families
from .graph import build_dual_graph, ensure_connected, ensure_rational, finite_slots, reorient
from .invariants import (
    arithmetic_genus,
    arithmetic_genus_from_delta,
    betti1,
    harmonic_space,
    is_harmonic,
    normalization_genus,
    residue_data_dimension,
    tropical_jacobian_dim,
    vertex_balance_matrix,
)
from .models import (
    Component,
    DisconnectedGraph,
    DualGraph,
    Edge,
    EdgeEnd,
    Flow,
    GraphStructureError,
    NonRationalComponent,
    Side,
    end_key,
)
