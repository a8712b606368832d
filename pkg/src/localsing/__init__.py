# Local analysis at plane-curve singularities from branch parametrizations
from .branches import (
    CATALOG,
    DEFAULT_TRUNCATION,
    Branch,
    BranchParametrizationError,
    BranchSystem,
    catalog,
    catalog_names,
    custom,
)
from .descent import (
    ConstraintCount,
    DescentVerdict,
    DimensionIdentity,
    NotGorensteinDetected,
    PrincipalPartSystem,
    coefficient_vector,
    conductor_annihilation_check,
    constraint_count_equals_delta,
    descends,
    descends_k,
    descent_columns,
    descent_constraints,
    descent_dimension_identity,
    dualizing_generator,
    weighted_residue_check,
)
from .globalcurve import Placement, RationalCurveDescent, rational_curve_descent
from .plane import plane_polynomial, pullback_plane_differential
from .reference import REFERENCE_VALUES, reference_warnings
from .ring import ConductorData, LocalRingModel, TruncationTooSmall, conductor_exponents, local_ring_model
