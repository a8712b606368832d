import logging
import random
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from ..curvegraph import DualGraph, GraphStructureError, Side, ensure_rational, finite_slots, harmonic_space
from ..diffcalc import KDifferential, PrincipalPart, from_principal_parts, k_residue, residue_sum
from ..exactnum import RationalFunction, random_rational, to_fraction
from .models import (
    EdgeResidue,
    EdgeResidueReport,
    GlobalKDifferential,
    IncompleteDifferential,
    PerturbationResult,
    ProbeVerdict,
)

logger = logging.getLogger(__name__)


def construct_global(G: DualGraph, k: int, edge_params: Mapping[str, object]) -> GlobalKDifferential:
    """eta_v = sum over node slots of +-a_e / (z - z_i)^k (dz)^k, + on the + end and - on the - end."""
    ensure_rational(G)
    if not finite_slots(G):
        raise GraphStructureError("construct_global needs every node slot at a finite coordinate")
    unknown = sorted(set(edge_params) - set(G.edge_ids))
    if unknown:
        raise GraphStructureError(f"Parameters given for unknown edges: {unknown}")
    missing = sorted(set(G.edge_ids) - set(edge_params))
    if missing:
        raise GraphStructureError(f"No parameter for edges: {missing}")
    params = {e: to_fraction(v) for e, v in edge_params.items()}
    pieces = {}
    for component in G.components:
        parts = []
        for edge, side, location in G.slots_on(component.id):
            a = params[edge.id] if side == Side.PLUS else -params[edge.id]
            if a != 0:
                parts.append(PrincipalPart.pure(location, a, k))
        pieces[component.id] = from_principal_parts(k, parts)
    return GlobalKDifferential(k=k, pieces=pieces)


def check_balancing(G: DualGraph, eta: GlobalKDifferential) -> EdgeResidueReport:
    rational = [c.id for c in G.components if c.rational_chart]
    missing = [c for c in rational if c not in eta.pieces]
    if missing:
        raise IncompleteDifferential(f"No differential on rational components {missing}")
    skipped_components = tuple(c.id for c in G.components if not c.rational_chart)
    edges: List[EdgeResidue] = []
    skipped_edges = []
    for edge in G.edges:
        if edge.plus in skipped_components or edge.minus in skipped_components:
            skipped_edges.append(edge.id)
            continue
        edges.append(
            EdgeResidue(
                edge_id=edge.id,
                res_plus=k_residue(eta.pieces[edge.plus], G.slot_of(edge, Side.PLUS)),
                res_minus=k_residue(eta.pieces[edge.minus], G.slot_of(edge, Side.MINUS)),
            )
        )
    sums = {c: residue_sum(eta.pieces[c]) for c in rational}
    report = EdgeResidueReport(
        k=eta.k,
        edges=tuple(edges),
        component_sums=sums,
        skipped_components=skipped_components,
        skipped_edges=tuple(skipped_edges),
    )
    if skipped_components:
        logger.warning(f"W-NONRATIONAL-SKIPPED: components {list(skipped_components)} have positive genus")
    logger.debug(f"Balancing at k={eta.k}: local_ok={report.local_ok}, global_ok={report.global_ok}")
    return report


def _slot_label(component_id: str, edge, side: Side) -> str:
    return f"{component_id}:{edge.id}{side.value}"


def random_slot_differential(
    G: DualGraph, k: int, rng: random.Random, bound: int
) -> Tuple[GlobalKDifferential, Dict[str, Fraction]]:
    """Random pure order-k parts at node slots, coefficients summing to 0 on each component.

    At k = 1 the zero sum keeps infinity regular. Edges are not balanced.
    """
    ensure_rational(G)
    if not finite_slots(G):
        raise GraphStructureError("equivalence_probe needs every node slot at a finite coordinate")
    pieces = {}
    coefficients: Dict[str, Fraction] = {}
    for component in G.components:
        slots = G.slots_on(component.id)
        drawn = [random_rational(rng, bound) for _ in slots[:-1]]
        drawn.append(-sum(drawn, Fraction(0)))
        parts = []
        for (edge, side, location), a in zip(slots, drawn):
            coefficients[_slot_label(component.id, edge, side)] = a
            if a != 0:
                parts.append(PrincipalPart.pure(location, a, k))
        pieces[component.id] = from_principal_parts(k, parts)
    return GlobalKDifferential(k=k, pieces=pieces), coefficients


def random_harmonic_differential(
    G: DualGraph, k: int, rng: random.Random, bound: int
) -> Tuple[GlobalKDifferential, Dict[str, Fraction]]:
    """construct_global on a random harmonic flow: balanced, and infinity-free at k = 1."""
    params = {e: Fraction(0) for e in G.edge_ids}
    for flow in harmonic_space(G):
        c = random_rational(rng, bound)
        for e in G.edge_ids:
            params[e] += c * flow[e]
    eta = construct_global(G, k, params)
    coefficients = {}
    for component in G.components:
        for edge, side, _ in G.slots_on(component.id):
            coefficients[_slot_label(component.id, edge, side)] = params[edge.id] if side == Side.PLUS else -params[edge.id]
    return eta, coefficients


def _perturbation_slots(G: DualGraph) -> Optional[Tuple[str, Tuple, Tuple]]:
    for component in G.components:
        slots = G.slots_on(component.id)
        for i, first in enumerate(slots):
            for second in slots[i + 1:]:
                if first[0].id != second[0].id:
                    return component.id, first, second
    return None


def _perturb(G: DualGraph, base: GlobalKDifferential, c: Fraction) -> Optional[Tuple[GlobalKDifferential, PerturbationResult]]:
    """Add c*(1/(z-s1) - 1/(z-s2)) dz on one component, with s1, s2 slots of different edges."""
    found = _perturbation_slots(G)
    if found is None:
        return None
    component_id, (edge1, _, s1), (edge2, _, s2) = found
    f = RationalFunction.polar_term(c, s1, 1) - RationalFunction.polar_term(c, s2, 1)
    extra = GlobalKDifferential(k=1, pieces={component_id: KDifferential(k=1, f=f)})
    perturbed = base + extra
    report = check_balancing(G, perturbed)
    return perturbed, PerturbationResult(
        component=component_id,
        edges=(edge1.id, edge2.id),
        local_ok=report.local_ok,
        global_ok=report.global_ok,
    )


def equivalence_probe(G: DualGraph, k: int, trials: int, seed: int = 1729, bound: int = 9) -> ProbeVerdict:
    """Random infinity-free differentials with poles only at node slots.

    Each trial draws either free slot coefficients or a random harmonic flow. At k = 1
    the probe asserts local_ok => global_ok and reports whether the converse held, with
    the first counterexample. At k >= 2 both sides are counted and nothing is asserted.
    """
    rng = random.Random(seed)
    verdict = ProbeVerdict(k=k, trials=trials, seed=seed, asserted=(k == 1))
    implication = True
    base = None
    for trial in range(trials):
        if rng.random() < 0.5:
            eta, coefficients = random_slot_differential(G, k, rng, bound)
        else:
            eta, coefficients = random_harmonic_differential(G, k, rng, bound)
        report = check_balancing(G, eta)
        verdict.local_ok_count += int(report.local_ok)
        verdict.global_ok_count += int(report.global_ok)
        if base is None:
            base = eta
        if report.local_ok != report.global_ok:
            verdict.mismatch_count += 1
            if verdict.counterexample is None:
                verdict.counterexample = coefficients
                verdict.counterexample_trial = trial
        if report.local_ok and not report.global_ok and k == 1 and implication:
            implication = False
            logger.warning(f"Balanced k=1 differential with a nonzero component sum at trial {trial}: {coefficients}")
    if k == 1:
        verdict.holds = verdict.mismatch_count == 0
        verdict.implication_holds = implication
        if verdict.mismatch_count:
            verdict.warnings.append("W-GLOBAL-CONDITION-AUTOMATIC")
            logger.warning(
                f"W-GLOBAL-CONDITION-AUTOMATIC: {verdict.mismatch_count}/{trials} unbalanced k=1 differentials "
                f"have zero residue sum on every component; first at trial {verdict.counterexample_trial}"
            )
        if base is not None:
            perturbed = _perturb(G, base, random_rational(rng, bound))
            if perturbed is not None:
                verdict.perturbation = perturbed[1]
                if perturbed[1].global_ok and not perturbed[1].local_ok and not verdict.warnings:
                    verdict.warnings.append("W-GLOBAL-CONDITION-AUTOMATIC")
                    logger.warning(
                        "W-GLOBAL-CONDITION-AUTOMATIC: an unbalanced k=1 differential still has zero "
                        f"residue sum on every component ({perturbed[1].component})"
                    )
    logger.info(
        f"Probe k={k}, {trials} trials: local_ok {verdict.local_ok_count}, global_ok {verdict.global_ok_count}"
    )
    return verdict
