# k-differentials on rational components in the two-chart model of P^1
from .kdifferential import (
    INFINITY,
    Chart,
    Infinity,
    KDifferential,
    Location,
    PolePoint,
    PrincipalPart,
    format_location,
    location_key,
    parse_location,
)
from .residues import (
    DuplicateLocation,
    all_residues,
    from_principal_parts,
    infinity_residue_formula_check,
    k_residue,
    pole_points,
    principal_part,
    residue_sum,
    to_infinity_chart,
)
