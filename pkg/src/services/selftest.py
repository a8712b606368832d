import logging
import random
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from pydantic import BaseModel, Field

from ..balance import dimension_report, dualizing_section_space, equivalence_probe, residue_matrix, span_report
from ..config import settings
from ..curvegraph import arithmetic_genus, betti1, families, harmonic_space, tropical_jacobian_dim
from ..diffcalc import INFINITY, KDifferential, k_residue, residue_sum, to_infinity_chart
from ..exactnum import LaurentSeries, RationalFunction, format_rational, random_rational, series
from ..localsing import (
    PrincipalPartSystem,
    catalog,
    conductor_annihilation_check,
    conductor_exponents,
    constraint_count_equals_delta,
    descends,
    descends_k,
    pullback_plane_differential,
    reference_warnings,
)
from ..models.report import Report, Verdict, VerdictStatus, WarningCode

logger = logging.getLogger(__name__)


class SkipCriterion(Exception):
    pass


class CriterionOutcome(BaseModel):
    passed: bool
    detail: Optional[str] = None
    warnings: List[Tuple[str, str]] = Field(default_factory=list)


def _agree(a: LaurentSeries, b: LaurentSeries) -> bool:
    """Equal on every coefficient both series know."""
    n = min(a.truncation_order, b.truncation_order)
    return a.truncated(n).terms() == b.truncated(n).terms()


def _random_series(rng: random.Random, bound: int) -> LaurentSeries:
    valuation = rng.randint(-2, 2)
    coefficients = [random_rational(rng, bound) for _ in range(rng.randint(1, 4))]
    return LaurentSeries.build(valuation, coefficients, valuation + rng.randint(4, 8))


def ring_axioms(rng: random.Random, bound: int, samples: int = 50) -> CriterionOutcome:
    for n in range(samples):
        a, b, c = (_random_series(rng, bound) for _ in range(3))
        checks = {
            "associativity": _agree(series.series_mul(series.series_mul(a, b), c), series.series_mul(a, series.series_mul(b, c))),
            "commutativity": _agree(series.series_mul(a, b), series.series_mul(b, a)),
            "distributivity": _agree(
                series.series_mul(a, series.series_add(b, c)),
                series.series_add(series.series_mul(a, b), series.series_mul(a, c)),
            ),
            "inverse": _agree(
                series.series_mul(a, series.series_invert(a)), LaurentSeries.from_polynomial([1], a.truncation_order)
            ),
        }
        failed = [name for name, ok in checks.items() if not ok]
        if failed:
            return CriterionOutcome(passed=False, detail=f"sample {n}: {', '.join(failed)} failed for a={a}, b={b}, c={c}")
    return CriterionOutcome(passed=True, detail=f"{samples} random triples")


def k_residue_examples(rng, bound) -> CriterionOutcome:
    eta = KDifferential.from_text(3, "1/z^3")
    cusp_cube = KDifferential.from_text(3, "1/z^6")
    values = (k_residue(eta, 0), k_residue(eta, INFINITY), k_residue(cusp_cube, 0))
    return CriterionOutcome(passed=values == (1, -1, 0), detail=f"(0, inf, t^-6) -> {values}")


def chart_change(rng, bound) -> CriterionOutcome:
    for k in range(1, 7):
        eta = KDifferential(k=k, f=RationalFunction.monomial(1, -k))
        image = to_infinity_chart(eta)
        if image.f != RationalFunction.monomial((-1) ** k, -k) or to_infinity_chart(image).f != eta.f:
            return CriterionOutcome(passed=False, detail=f"k={k}: got {image.to_text()}")
    return CriterionOutcome(passed=True, detail="k = 1..6")


def _random_rational_function(rng: random.Random, bound: int) -> RationalFunction:
    numerator = [random_rational(rng, bound) for _ in range(rng.randint(1, 4))]
    f = RationalFunction.from_coefficients(numerator)
    poles = set()
    for _ in range(rng.randint(1, 3)):
        poles.add(random_rational(rng, bound))
    for p in poles:
        f = f * RationalFunction.polar_term(1, p, rng.randint(1, 3))
    return f


def residue_theorem(rng, bound, trials: Optional[int] = None) -> CriterionOutcome:
    trials = trials or settings.residue_theorem_trials
    for n in range(trials):
        eta = KDifferential(k=1, f=_random_rational_function(rng, bound))
        total = residue_sum(eta)
        if total != 0:
            return CriterionOutcome(passed=False, detail=f"trial {n}: residue sum {total} for {eta.to_text()}")
    return CriterionOutcome(passed=True, detail=f"{trials} random differentials")


def _probe_graphs(seed: int):
    return [
        ("triangle", families.triangle()),
        ("chain3", families.chain(3)),
        ("theta", families.theta(3)),
        ("random6", families.random_connected(6, 2, seed)),
    ]


def balancing_equivalence(rng, bound, trials: Optional[int] = None, seed: Optional[int] = None) -> CriterionOutcome:
    """Balanced implies zero component sums on every graph; the converse is reported, not asserted."""
    trials = trials or settings.probe_trials
    seed = settings.probe_seed if seed is None else seed
    warnings = []
    mismatches = []
    for name, G in _probe_graphs(seed):
        probe = equivalence_probe(G, 1, trials, seed, bound)
        if not probe.implication_holds:
            return CriterionOutcome(passed=False, detail=f"{name}: balanced trial with a nonzero component sum")
        if probe.mismatch_count:
            mismatches.append(f"{name} {probe.mismatch_count}/{trials}")
            if not warnings:
                warnings.append(
                    (
                        WarningCode.GLOBAL_CONDITION_AUTOMATIC.value,
                        f"{name}: unbalanced k=1 differential with zero component sums at trial "
                        f"{probe.counterexample_trial}: "
                        + ", ".join(f"{slot}={format_rational(a)}" for slot, a in probe.counterexample.items()),
                    )
                )
    detail = f"{trials} trials on 4 graphs; local_ok <=> global_ok failed on " + (", ".join(mismatches) or "none")
    return CriterionOutcome(passed=True, detail=detail, warnings=warnings)


def dimension_counts(rng, bound, seed: Optional[int] = None) -> CriterionOutcome:
    seed = settings.probe_seed if seed is None else seed
    for n, G in enumerate(families.dimension_family(settings.dimension_family_size, seed)):
        if len(dualizing_section_space(G)) != betti1(G):
            return CriterionOutcome(passed=False, detail=f"family graph {n}: dim W != b1")
    triangle = families.triangle()
    ok = len(dualizing_section_space(triangle)) == 1 == arithmetic_genus(triangle)
    return CriterionOutcome(passed=ok, detail=f"{settings.dimension_family_size} graphs; triangle dim W = p_a = 1")


def _span_graphs():
    return [("triangle", families.triangle()), ("chain3", families.chain(3)), ("theta", families.theta(3))] + [
        (f"loops{d}", families.loops(d)) for d in (1, 2, 3)
    ]


def residue_span(rng, bound) -> CriterionOutcome:
    for name, G in _span_graphs():
        basis = dualizing_section_space(G)
        report = span_report(residue_matrix(G, basis), arithmetic_genus(G), len(G.edges))
        if not (report.injective and report.spans_dual):
            return CriterionOutcome(passed=False, detail=f"{name}: rank {report.rank} on {report.n_columns} columns")
        if name.startswith("loops") and report.rank != len(G.edges):
            return CriterionOutcome(passed=False, detail=f"{name}: rank {report.rank}")
    return CriterionOutcome(passed=True, detail="injective on all test graphs; loops rank delta")


def image_rank(rng, bound) -> CriterionOutcome:
    warnings = []
    for name, G in [("triangle", families.triangle())] + [(f"loops{d}", families.loops(d)) for d in (1, 2, 3)]:
        report = dimension_report(G)
        expected = len(G.edges) - 1
        if report.im_res_dim != expected or report.n_constraints_independent != expected:
            return CriterionOutcome(passed=False, detail=f"{name}: im {report.im_res_dim}, expected {expected}")
        if "W-CONDUCTOR-COUNT" not in report.warnings:
            return CriterionOutcome(passed=False, detail=f"{name}: count discrepancy not flagged")
    warnings.append((WarningCode.CONDUCTOR_COUNT.value, "independent node constraints number delta - 1, not delta"))
    return CriterionOutcome(passed=True, detail="dim Im(Res) = delta - 1", warnings=warnings)


EXPECTED_CONDUCTORS = {"node": ((1, 1), 1), "cusp": ((2,), 1), "tacnode": ((2, 2), 2)}


def conductor_entry(name: str) -> Callable:
    def check(rng, bound) -> CriterionOutcome:
        try:
            B = catalog(name)
        except KeyError:
            raise SkipCriterion(f"{name} missing from the singularity catalog")
        data = conductor_exponents(B, settings.stability_step)
        count = constraint_count_equals_delta(B, data)
        expected = EXPECTED_CONDUCTORS[name]
        ok = (tuple(data.exponents), data.delta) == expected and count.equal
        warnings = [(code, f"{name}: computed conductor {data.exponents}") for code in reference_warnings(B, data)]
        return CriterionOutcome(
            passed=ok, detail=f"c = {data.exponents}, delta = {data.delta}, rank = {count.rank}", warnings=warnings
        )

    return check


def descent_examples(rng, bound) -> CriterionOutcome:
    try:
        node, cusp = catalog("node"), catalog("cusp")
    except KeyError as e:
        raise SkipCriterion(str(e))
    checks = []
    for a in range(-2, 3):
        for b in range(-2, 3):
            eta = PrincipalPartSystem(k=1, tails={0: (a,), 1: (b,)})
            checks.append(descends(node, eta).descends == (a + b == 0))
    generator = PrincipalPartSystem(k=1, tails={0: (1, 0)})
    checks.append(descends(cusp, generator).descends)
    pullback = pullback_plane_differential("y^2 - x^3", cusp, 0)
    checks.append(pullback.terms() == {-2: Fraction(1)})
    simple = PrincipalPartSystem(k=1, tails={0: (1,)})
    checks.append(not descends(cusp, simple).descends and conductor_annihilation_check(cusp, simple))
    warnings = []
    if "W-CUSP-EX2-CONFLICT" in reference_warnings(cusp, conductor_exponents(cusp)):
        warnings.append((WarningCode.CUSP_EX2_CONFLICT.value, "cusp dt/t passes annihilation but fails residue pairing"))
    return CriterionOutcome(passed=all(checks), detail=f"{sum(checks)}/{len(checks)} checks", warnings=warnings)


def gorenstein_descent(rng, bound) -> CriterionOutcome:
    try:
        cusp = catalog("cusp")
    except KeyError as e:
        raise SkipCriterion(str(e))
    trunc = cusp.truncation + 16
    results = tuple(descends_k(cusp, [LaurentSeries.from_terms({-n: 1}, trunc)], 3) for n in (6, 3, 7))
    return CriterionOutcome(passed=results == (True, True, False), detail=f"t^-6, t^-3, t^-7 -> {results}")


def tropical(rng, bound, seed: Optional[int] = None) -> CriterionOutcome:
    seed = settings.probe_seed if seed is None else seed
    graphs = [G for _, G in _span_graphs()] + [families.random_connected(6, 3, seed), families.star(3)]
    ok = all(len(harmonic_space(G)) == betti1(G) for G in graphs)
    ok = ok and tropical_jacobian_dim(families.triangle()) == 1
    return CriterionOutcome(passed=ok, detail=f"{len(graphs)} graphs")


def _apply(report: Report, name: str, check: Callable, rng: random.Random, bound: int) -> None:
    try:
        outcome = check(rng, bound)
    except SkipCriterion as e:
        report.verdicts.append(Verdict(name=name, status=VerdictStatus.SKIP, detail=str(e)))
        return
    except Exception as e:
        logger.error(f"Self-test criterion {name} raised {type(e).__name__}: {e}")
        report.verdicts.append(Verdict.check(name, False, detail=f"{type(e).__name__}: {e}"))
        return
    report.verdicts.append(Verdict.check(name, outcome.passed, detail=outcome.detail))
    for code, message in outcome.warnings:
        report.warn(WarningCode(code), message)


def _criteria(trials: Optional[int], seed: int) -> List[Tuple[str, Callable]]:
    criteria = [
        ("ring-axioms", ring_axioms),
        ("01-k-residue", k_residue_examples),
        ("02-chart-change", chart_change),
        ("03-residue-theorem", residue_theorem),
        ("04-balancing-equivalence", lambda r, b: balancing_equivalence(r, b, trials, seed)),
        ("05-dimension-counts", lambda r, b: dimension_counts(r, b, seed)),
        ("06-residue-span", residue_span),
        ("07-image-rank", image_rank),
    ]
    criteria += [(f"08-conductor:{name}", conductor_entry(name)) for name in EXPECTED_CONDUCTORS]
    criteria += [
        ("09-descent-examples", descent_examples),
        ("10-gorenstein-descent", gorenstein_descent),
        ("11-tropical", lambda r, b: tropical(r, b, seed)),
    ]
    return criteria


def _run(criteria: List[Tuple[str, Callable]], trials: Optional[int], seed: int, bound: int) -> Report:
    rng = random.Random(seed)
    report = Report(command="selftest", inputs_digest=f"seed:{seed},trials:{trials or settings.probe_trials}")
    for name, check in criteria:
        logger.info(f"Self-test criterion {name}")
        _apply(report, name, check, rng, bound)
    return report


def determinism(rng, bound, trials: Optional[int] = None, seed: Optional[int] = None) -> CriterionOutcome:
    """Two runs of every other criterion with the same seed render byte-identical JSON."""
    seed = settings.probe_seed if seed is None else seed
    first = _run(_criteria(trials, seed), trials, seed, bound).render_json()
    second = _run(_criteria(trials, seed), trials, seed, bound).render_json()
    return CriterionOutcome(passed=first == second, detail=f"{len(first.encode('utf-8'))} bytes compared")


def run_selftest(trials: Optional[int] = None, seed: Optional[int] = None) -> Report:
    seed = settings.probe_seed if seed is None else seed
    criteria = _criteria(trials, seed) + [("12-determinism", lambda r, b: determinism(r, b, trials, seed))]
    return _run(criteria, trials, seed, settings.random_bound)
