import itertools
import random
from unittest.mock import patch

import pytest

from src.balance import ProbeVerdict
from src.exactnum.series import series_add
from src.localsing.branches import CATALOG
from src.models.report import Report, VerdictStatus, WarningCode
from src.services.selftest import (
    CriterionOutcome,
    _apply,
    balancing_equivalence,
    chart_change,
    conductor_entry,
    descent_examples,
    determinism,
    gorenstein_descent,
    k_residue_examples,
    residue_span,
    ring_axioms,
    run_selftest,
)


class TestCriteria:
    @pytest.fixture
    def rng(self):
        return random.Random(11)

    def test_ring_axioms(self, rng):
        assert ring_axioms(rng, 9).passed

    def test_ring_axioms_catch_a_broken_product(self, rng, mocker):
        mocker.patch("src.exactnum.series.series_mul", side_effect=lambda a, b: series_add(a, b))
        outcome = ring_axioms(rng, 9)
        assert not outcome.passed
        assert "failed" in outcome.detail

    @pytest.mark.parametrize(
        "criterion", [k_residue_examples, chart_change, residue_span, gorenstein_descent], ids=lambda c: c.__name__
    )
    def test_fixed_criteria_pass(self, rng, criterion):
        assert criterion(rng, 9).passed

    def test_descent_examples_carry_cusp_warning(self, rng):
        outcome = descent_examples(rng, 9)
        assert outcome.passed
        assert [code for code, _ in outcome.warnings] == [WarningCode.CUSP_EX2_CONFLICT.value]

    @pytest.mark.parametrize("name", ["node", "cusp", "tacnode"])
    def test_conductor_entries(self, rng, name):
        assert conductor_entry(name)(rng, 9).passed

    def test_balancing_equivalence_reports_unbalanced_trials(self, rng):
        outcome = balancing_equivalence(rng, 9, trials=20, seed=3)
        assert outcome.passed
        assert "triangle" in outcome.detail
        assert [code for code, _ in outcome.warnings] == [WarningCode.GLOBAL_CONDITION_AUTOMATIC.value]

    def test_balancing_equivalence_fails_on_broken_implication(self, rng, mocker):
        mocker.patch(
            "src.services.selftest.equivalence_probe",
            return_value=ProbeVerdict(k=1, trials=1, seed=0, asserted=True, implication_holds=False),
        )
        outcome = balancing_equivalence(rng, 9, trials=1, seed=0)
        assert not outcome.passed
        assert outcome.detail.startswith("triangle")

    def test_determinism_catches_varying_output(self, rng, mocker):
        counter = itertools.count()
        mocker.patch(
            "src.services.selftest._criteria",
            return_value=[("varying", lambda r, b: CriterionOutcome(passed=True, detail=str(next(counter))))],
        )
        assert not determinism(rng, 9, trials=1, seed=5).passed

    def test_determinism_runs_every_other_criterion(self, rng, mocker):
        spy = mocker.patch("src.services.selftest._criteria", return_value=[("01-k-residue", k_residue_examples)])
        assert determinism(rng, 9, trials=1, seed=5).passed
        assert spy.call_count == 2
        spy.assert_called_with(1, 5)

    @pytest.mark.slow
    def test_determinism(self, rng):
        assert determinism(rng, 9, trials=2, seed=5).passed


class TestApply:
    def test_missing_catalog_entry_is_skipped(self):
        report = Report(command="selftest", inputs_digest="seed:0")
        with patch.dict(CATALOG):
            del CATALOG["tacnode"]
            _apply(report, "08-conductor:tacnode", conductor_entry("tacnode"), random.Random(0), 9)
        verdict = report.verdict("08-conductor:tacnode")
        assert verdict.status == VerdictStatus.SKIP
        assert report.passed

    def test_raising_criterion_fails(self):
        report = Report(command="selftest", inputs_digest="seed:0")
        _apply(report, "broken", lambda rng, bound: 1 / 0, random.Random(0), 9)
        verdict = report.verdict("broken")
        assert verdict.status == VerdictStatus.FAIL
        assert verdict.detail.startswith("ZeroDivisionError")
        assert not report.passed

    def test_warnings_are_recorded(self):
        report = Report(command="selftest", inputs_digest="seed:0")
        _apply(report, "09-descent-examples", descent_examples, random.Random(0), 9)
        assert [w.code for w in report.warnings] == [WarningCode.CUSP_EX2_CONFLICT]


@pytest.mark.slow
class TestRunSelftest:
    def test_full_run_passes(self):
        report = run_selftest(trials=3, seed=2)
        assert report.passed
        names = [v.name for v in report.verdicts]
        assert names[0] == "ring-axioms"
        assert names[-1] == "12-determinism"
        assert "08-conductor:tacnode" in names
        codes = {w.code for w in report.warnings}
        assert {WarningCode.TACNODE_PARAMETRIZATION, WarningCode.CUSP_EX2_CONFLICT} <= codes

    def test_same_seed_same_report(self):
        assert run_selftest(trials=2, seed=3).render_json() == run_selftest(trials=2, seed=3).render_json()
