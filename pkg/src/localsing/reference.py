import logging
from fractions import Fraction
from typing import Dict, List

from ..exactnum import ConstraintSystem
from .branches import BranchSystem
from .descent import descent_constraints
from .ring import ConductorData

logger = logging.getLogger(__name__)

# Values stated in the literature next to the computed ones.
REFERENCE_VALUES: Dict[str, Dict[str, object]] = {
    "tacnode": {
        "conductor_exponents": (4, 4),
        "parametrization": "x = t^2 = s^2, y = t^4 = -s^4",
    },
    "cusp": {
        # stated: the t^-2 coefficient is forced to vanish while t^-1 dt is allowed
        "forced_zero": "t^-2",
        "allowed": "t^-1",
    },
}


def _forced_zero(system: ConstraintSystem, column: str) -> bool:
    unit = [Fraction(int(name == column)) for name in system.columns]
    return system.contains(unit)


def reference_warnings(B: BranchSystem, conductor: ConductorData) -> List[str]:
    """Stable warning ids for catalog singularities whose computed data disagree with the stated values."""
    warnings = []
    if B.name == "tacnode":
        stated = REFERENCE_VALUES["tacnode"]["conductor_exponents"]
        if tuple(conductor.exponents) != stated:
            warnings.append("W-TACNODE-PARAMETRIZATION")
            logger.warning(
                f"W-TACNODE-PARAMETRIZATION: computed conductor {conductor.exponents} under the primitive "
                f"parametrization, stated {stated} under {REFERENCE_VALUES['tacnode']['parametrization']}"
            )
    if B.name == "cusp":
        system = descent_constraints(B, (2,))
        stated = REFERENCE_VALUES["cusp"]
        if _forced_zero(system, "b0:t^-1") or not _forced_zero(system, "b0:t^-2"):
            warnings.append("W-CUSP-EX2-CONFLICT")
            logger.warning(
                f"W-CUSP-EX2-CONFLICT: residue pairing forces the t^-1 coefficient to vanish and leaves t^-2 free; "
                f"stated: {stated['forced_zero']} forced, {stated['allowed']} allowed"
            )
    return warnings
