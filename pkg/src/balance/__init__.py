# Global constructions on nodal curves: balancing, dualizing sections, residue span
from .construction import (
    check_balancing,
    construct_global,
    equivalence_probe,
    random_harmonic_differential,
    random_slot_differential,
)
from .models import (
    DimensionReport,
    EdgeResidue,
    EdgeResidueReport,
    GlobalKDifferential,
    IncompleteDifferential,
    PerturbationResult,
    ProbeVerdict,
    ResidueMatrix,
    SpanReport,
)
from .sections import (
    describe_basis,
    dimension_report,
    dualizing_section_space,
    equisingular_kernel,
    node_supported_space,
    residue_matrix,
    span_report,
)
