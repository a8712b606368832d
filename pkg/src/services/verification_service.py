import logging
from fractions import Fraction
from typing import Callable, List, Optional

from ..balance import (
    IncompleteDifferential,
    check_balancing,
    construct_global,
    describe_basis,
    dimension_report,
    dualizing_section_space,
    equisingular_kernel,
    equivalence_probe,
    residue_matrix,
    span_report,
)
from ..config import settings
from ..curvegraph import (
    DisconnectedGraph,
    GraphStructureError,
    NonRationalComponent,
    Side,
    arithmetic_genus,
    arithmetic_genus_from_delta,
    betti1,
    harmonic_space,
    normalization_genus,
    residue_data_dimension,
    tropical_jacobian_dim,
)
from ..diffcalc import (
    DuplicateLocation,
    PrincipalPart,
    all_residues,
    format_location,
    infinity_residue_formula_check,
)
from ..exactnum import IrrationalPole, RationalFunction, default_truncation, format_rational, series_expand
from ..localsing import (
    BranchParametrizationError,
    BranchSystem,
    NotGorensteinDetected,
    PrincipalPartSystem,
    TruncationTooSmall,
    conductor_annihilation_check,
    conductor_exponents,
    constraint_count_equals_delta,
    descends,
    descends_k,
    descent_dimension_identity,
    dualizing_generator,
    local_ring_model,
    rational_curve_descent,
    reference_warnings,
    weighted_residue_check,
)
from ..models.document import CurveDocument
from ..models.report import Report, Verdict, WarningCode
from .document_loader import DocumentError, document_loader
from .selftest import run_selftest

logger = logging.getLogger(__name__)

INPUT_ERRORS = (
    DocumentError,
    GraphStructureError,
    DisconnectedGraph,
    NonRationalComponent,
    IncompleteDifferential,
    IrrationalPole,
    DuplicateLocation,
    BranchParametrizationError,
    NotGorensteinDetected,
)


class VerificationServiceError(Exception):
    pass


def _tensor_power(k: Optional[int]) -> int:
    if k is None:
        return settings.default_k
    if k < 1:
        raise DocumentError(f"k must be a positive integer, got {k}")
    return k


class VerificationService:
    def __init__(self):
        pass

    def _execute(self, command: str, build: Callable[[], Report]) -> Report:
        try:
            logger.info(f"Running {command}")
            report = build()
            logger.info(f"{command}: {'pass' if report.passed else 'fail'}")
            return report
        except INPUT_ERRORS + (TruncationTooSmall,):
            raise
        except Exception as e:
            logger.error(f"Unexpected error in {command}: {e}")
            raise VerificationServiceError(f"Failed to run {command}: {str(e)}")

    def graph_invariants(self, document: CurveDocument) -> Report:
        def build() -> Report:
            G = document_loader.to_graph(document)
            report = Report(command="graph-invariants", inputs_digest=document_loader.digest(document))
            b1 = betti1(G)
            # each node has delta 1; joining |V| components uses |V| - 1 of them
            from_delta = arithmetic_genus_from_delta(normalization_genus(G), [1] * len(G.edges))
            from_delta -= len(G.components) - 1
            report.verdicts += [
                Verdict.info("vertices", len(G.components)),
                Verdict.info("edges", len(G.edges)),
                Verdict.info("betti1", b1),
                Verdict.info("normalization-genus", normalization_genus(G)),
                Verdict.info("arithmetic-genus", arithmetic_genus(G)),
                Verdict.info("tropical-jacobian-dim", tropical_jacobian_dim(G)),
                Verdict.info("residue-data-dimension", residue_data_dimension(G)),
                Verdict.check("harmonic-dimension-equals-betti1", len(harmonic_space(G)) == b1, len(harmonic_space(G))),
                Verdict.check(
                    "arithmetic-genus-from-delta",
                    from_delta == arithmetic_genus(G),
                    from_delta,
                    detail="sum g_v + delta - (|V| - 1)",
                ),
            ]
            return report

        return self._execute("graph-invariants", build)

    def check_balance(
        self, document: CurveDocument, k: Optional[int] = None, trials: int = 0, seed: Optional[int] = None
    ) -> Report:
        def build() -> Report:
            G = document_loader.to_graph(document)
            eta = document_loader.global_differential(document, G, None if k is None else _tensor_power(k))
            report = Report(
                command="check-balance", inputs_digest=document_loader.digest(document, k=k, trials=trials, seed=seed)
            )
            balance = check_balancing(G, eta)
            for edge in balance.edges:
                report.verdicts.append(
                    Verdict.check(
                        f"edge:{edge.edge_id}",
                        edge.sum == 0,
                        edge.sum,
                        detail=f"res+ {edge.res_plus}, res- {edge.res_minus}",
                    )
                )
            for component_id, total in sorted(balance.component_sums.items()):
                report.verdicts.append(Verdict.check(f"component:{component_id}", total == 0, total))
            report.verdicts.append(Verdict.check("local_ok", balance.local_ok))
            report.verdicts.append(Verdict.check("global_ok", balance.global_ok))
            if balance.skipped_components:
                report.warn(
                    WarningCode.NONRATIONAL_SKIPPED,
                    f"components {list(balance.skipped_components)} and edges {list(balance.skipped_edges)} not checked",
                )
            if eta.k % 2 == 0 and not balance.global_ok:
                report.warn(WarningCode.EVEN_K_RESIDUE, f"k={eta.k}: component residue sums do not vanish")
            if trials and not balance.skipped_components:
                self._probe(report, G, eta.k, trials, seed)
            return report

        return self._execute("check-balance", build)

    def _probe(self, report: Report, G, k: int, trials: int, seed: Optional[int]) -> None:
        probe = equivalence_probe(G, k, trials, seed if seed is not None else settings.probe_seed, settings.random_bound)
        counts = f"local {probe.local_ok_count}/{trials}, global {probe.global_ok_count}/{trials}"
        if probe.asserted:
            report.verdicts.append(
                Verdict.check(
                    "local-implies-global",
                    bool(probe.implication_holds),
                    f"{probe.local_ok_count}/{trials}",
                    detail="every balanced trial has zero component residue sums",
                )
            )
            report.verdicts.append(
                Verdict.info(
                    "equivalence-probe", counts, detail=f"local_ok <=> global_ok in {trials - probe.mismatch_count} trials"
                )
            )
        else:
            report.verdicts.append(Verdict.info("equivalence-probe", counts, detail=f"not asserted at k={k}"))
        if "W-GLOBAL-CONDITION-AUTOMATIC" not in probe.warnings:
            return
        if probe.counterexample is not None:
            shown = ", ".join(f"{slot}={format_rational(a)}" for slot, a in probe.counterexample.items())
            report.warn(
                WarningCode.GLOBAL_CONDITION_AUTOMATIC,
                f"{probe.mismatch_count}/{trials} unbalanced trials keep every component residue sum at 0; "
                f"first at trial {probe.counterexample_trial}: {shown}",
            )
        elif probe.perturbation is not None:
            report.warn(
                WarningCode.GLOBAL_CONDITION_AUTOMATIC,
                f"unbalanced perturbation on {probe.perturbation.component} (edges "
                f"{', '.join(probe.perturbation.edges)}) keeps every component residue sum at 0",
            )

    def construct(self, document: CurveDocument, k: Optional[int] = None, params: Optional[str] = None) -> Report:
        def build() -> Report:
            G = document_loader.to_graph(document)
            k_value = _tensor_power(k)
            if params:
                raw = document_loader.parse_params(params)
            else:
                raw = document_loader.differential_entry(document, None).edge_params or {}
            values = document_loader.edge_params(G, raw)
            eta = construct_global(G, k_value, values)
            report = Report(command="construct", inputs_digest=document_loader.digest(document, k=k_value, params=params))
            report.verdicts.append(Verdict.info("k", k_value, detail="emitted pieces are coefficients of (dz)^k"))
            for component in G.components:
                piece = eta.pieces[component.id]
                report.emitted[component.id] = piece.f.to_text()
                for location, value in all_residues(piece).items():
                    report.verdicts.append(Verdict.info(f"residue:{component.id}@{format_location(location)}", value))
                parts = []
                for edge, side, location in G.slots_on(component.id):
                    a = values[edge.id] if side == Side.PLUS else -values[edge.id]
                    if a != 0:
                        parts.append(PrincipalPart.pure(location, a, k_value))
                predicted, actual = infinity_residue_formula_check(k_value, parts)
                report.verdicts.append(
                    Verdict.check(f"infinity-formula:{component.id}", predicted == actual, actual, detail=f"predicted {predicted}")
                )
            balance = check_balancing(G, eta)
            report.verdicts.append(Verdict.check("local_ok", balance.local_ok))
            for component_id, total in sorted(balance.component_sums.items()):
                report.verdicts.append(Verdict.info(f"component-sum:{component_id}", total))
            if k_value % 2 == 0 and not balance.global_ok:
                report.warn(
                    WarningCode.EVEN_K_RESIDUE,
                    f"k={k_value}: component sums equal (1 + (-1)^k) * sum a_i, not 0",
                )
            return report

        return self._execute("construct", build)

    def span(self, document: CurveDocument) -> Report:
        def build() -> Report:
            G = document_loader.to_graph(document)
            basis = dualizing_section_space(G)
            M = residue_matrix(G, basis)
            span = span_report(M, arithmetic_genus(G), len(G.edges))
            dims = dimension_report(G)
            report = Report(command="span", inputs_digest=document_loader.digest(document))
            report.verdicts += [
                Verdict.info("dim-W", len(basis)),
                Verdict.check("dim-W-equals-betti1", len(basis) == betti1(G), betti1(G)),
                Verdict.info("residue-matrix-rank", span.rank),
                Verdict.check("injective", span.injective),
                Verdict.check("spans_dual", span.spans_dual),
                Verdict.check("delta-at-least-genus", span.delta_at_least_genus, f"{span.delta} >= {span.genus}"),
                Verdict.info("equisingular-kernel-dim", len(equisingular_kernel(M))),
                Verdict.info("h_VD", dims.h_vd),
                Verdict.info("h_W", dims.h_w),
                Verdict.info("n_constraints_independent", dims.n_constraints_independent),
                Verdict.info("im-res-dim", dims.im_res_dim),
                Verdict.info("sum-delta-x", dims.sum_delta_x),
                Verdict.check("im-res-equals-delta-minus-one", dims.im_res_dim == dims.delta_minus_one, dims.delta_minus_one),
                Verdict.check("constraints-equal-im-res", dims.n_constraints_independent == dims.im_res_dim),
                Verdict.info("kernel-on-VD-dim", dims.kernel_on_vd_dim),
                Verdict.info("kernel-on-W-dim", dims.kernel_on_w_dim),
            ]
            for j, element in enumerate(describe_basis(G, basis)):
                for component_id, text in element.items():
                    report.emitted[f"W{j}:{component_id}"] = text
            if "W-CONDUCTOR-COUNT" in dims.warnings:
                report.warn(
                    WarningCode.CONDUCTOR_COUNT,
                    f"{dims.n_constraints_independent} independent node constraints against sum of delta_x = {dims.sum_delta_x}",
                )
            if "W-RES-KERNEL" in dims.warnings:
                report.warn(
                    WarningCode.RES_KERNEL,
                    f"kernel of Res: {dims.kernel_on_vd_dim} on the simple-pole space, {dims.kernel_on_w_dim} on W",
                )
            return report

        return self._execute("span", build)

    def _branch_functions(self, B: BranchSystem, text: str) -> List[RationalFunction]:
        texts = [t.strip() for t in text.split(",")]
        if len(texts) != B.n_branches:
            raise DocumentError(f"{B.name} has {B.n_branches} branches; differential gives {len(texts)}")
        try:
            functions = [RationalFunction.from_text(t, "t") for t in texts]
        except (ValueError, IrrationalPole) as e:
            raise DocumentError(f"Differential {text!r}: {e}")
        for i, f in enumerate(functions):
            order = max(-series_expand(f, 0, 0).valuation, 0)
            if order > settings.max_pole_order:
                raise DocumentError(
                    f"Branch {i} pole order {order} exceeds the configured bound {settings.max_pole_order}"
                )
        return functions

    def _branch_differential(self, B: BranchSystem, functions: List[RationalFunction], k: int):
        tails = {}
        for i, f in enumerate(functions):
            principal = series_expand(f, 0, 0)
            order = -principal.valuation if not principal.is_zero else 0
            tails[i] = principal.coefficient_vector(-order, 0)
        series = [series_expand(f, 0, B.truncation + 8) for f in functions]
        return PrincipalPartSystem(k=k, tails=tails), series

    def _fit_truncation(self, B: BranchSystem, data, eta: PrincipalPartSystem, k: int) -> BranchSystem:
        """Raise N to 2 * max c_i + k * max pole order + guard when the differential needs more room."""
        max_pole = max((eta.pole_order(i) for i in range(B.n_branches)), default=0)
        needed = default_truncation(max(data.exponents), k, max_pole, settings.truncation_guard)
        if needed <= B.truncation:
            return B
        logger.info(f"{B.name}: raising truncation from {B.truncation} to {needed}")
        return B.with_truncation(needed)

    def conductor(
        self,
        document: Optional[CurveDocument],
        singularity: str,
        differential: Optional[str] = None,
        k: Optional[int] = None,
        trunc: Optional[int] = None,
    ) -> Report:
        def build() -> Report:
            k_value = _tensor_power(k)
            B = document_loader.singularity(document, singularity, trunc)
            report = Report(
                command="conductor",
                inputs_digest=document_loader.digest(
                    document, singularity=singularity, differential=differential, k=k_value, trunc=trunc
                ),
            )
            data = conductor_exponents(B, settings.stability_step)
            functions = self._branch_functions(B, differential) if differential else None
            if functions is not None and trunc is None:
                eta, _ = self._branch_differential(B, functions, k_value)
                fitted = self._fit_truncation(B, data, eta, k_value)
                if fitted.truncation != B.truncation:
                    B = fitted
                    data = conductor_exponents(B, settings.stability_step)
            model = local_ring_model(B)
            minimal = all(
                model.contains(model.indicator(i, c)) and (c == 0 or not model.contains(model.indicator(i, c - 1)))
                for i, c in enumerate(data.exponents)
            )
            count = constraint_count_equals_delta(B, data)
            identity = descent_dimension_identity(B, data)
            report.verdicts += [
                Verdict.info("branches", B.n_branches, detail="; ".join(b.describe() for b in B.branches)),
                Verdict.info("truncation", B.truncation),
                Verdict.info("conductor-exponents", list(data.exponents)),
                Verdict.info("delta", data.delta),
                Verdict.check("conductor-minimal", minimal),
                Verdict.check("constraint-rank-equals-delta", count.equal, count.rank, detail=f"delta {count.delta}"),
                Verdict.check(
                    "dimension-identity",
                    identity.exact and identity.symmetric,
                    identity.descending_dimension,
                    detail=f"{identity.total_degrees_of_freedom} - {identity.rank}",
                ),
            ]
            try:
                generator = dualizing_generator(B, data)
                report.verdicts.append(Verdict.info("dualizing-generator", " | ".join(generator.describe().values())))
            except NotGorensteinDetected as e:
                generator = None
                report.verdicts.append(Verdict.info("dualizing-generator", None, detail=str(e)))
            for code in reference_warnings(B, data):
                report.warn(WarningCode(code), self._reference_message(code, data))
            if functions is not None:
                eta, series = self._branch_differential(B, functions, k_value)
                if k_value == 1:
                    verdict = descends(B, eta, data)
                    report.verdicts.append(
                        Verdict.check("descent", verdict.descends, detail="; ".join(verdict.violations) or None)
                    )
                    weighted = weighted_residue_check(B, eta, data)
                    report.verdicts.append(Verdict.check("conductor-annihilation", conductor_annihilation_check(B, eta, data)))
                    report.verdicts.append(Verdict.check("weighted-residue", weighted == 0, weighted))
                    if generator is not None:
                        agrees = descends_k(B, series, 1, data) == verdict.descends
                        report.verdicts.append(Verdict.check("generator-division-agrees", agrees))
                else:
                    report.verdicts.append(Verdict.check("descent-k", descends_k(B, series, k_value, data)))
                    report.verdicts.append(
                        Verdict.info("conductor-annihilation", conductor_annihilation_check(B, eta, data))
                    )
                    report.verdicts.append(Verdict.info("weighted-residue", weighted_residue_check(B, eta, data)))
            return report

        return self._execute("conductor", build)

    def _reference_message(self, code: str, data) -> str:
        if code == WarningCode.TACNODE_PARAMETRIZATION.value:
            return f"computed conductor {tuple(data.exponents)} under x = t, y = +-t^2; stated (4, 4) under x = t^2 = s^2"
        return "residue pairing forces the t^-1 coefficient to vanish and leaves t^-2 free; stated the reverse"

    def descent_global(self, document: CurveDocument, trunc: Optional[int] = None) -> Report:
        def build() -> Report:
            placements = document_loader.placements(document, trunc)
            result = rational_curve_descent(placements)
            report = Report(command="descent-global", inputs_digest=document_loader.digest(document, trunc=trunc))
            for placement_id, data in sorted(result.conductors.items()):
                report.verdicts.append(
                    Verdict.info(f"conductor:{placement_id}", list(data.exponents), detail=f"delta {data.delta}")
                )
            report.verdicts += [
                Verdict.info("unknowns", result.n_unknowns),
                Verdict.info("rank", result.rank),
                Verdict.check("constraints-additive", result.additive, sum(result.local_ranks.values())),
                Verdict.check(
                    "dimension-equals-arithmetic-genus",
                    result.dimension == result.arithmetic_genus,
                    result.dimension,
                    detail=f"p_a {result.arithmetic_genus}",
                ),
            ]
            for j, text in enumerate(result.basis):
                report.emitted[f"omega{j}"] = text
            return report

        return self._execute("descent-global", build)

    def selftest(self, trials: Optional[int] = None, seed: Optional[int] = None) -> Report:
        return self._execute("selftest", lambda: run_selftest(trials=trials, seed=seed))


verification_service = VerificationService()
