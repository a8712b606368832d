import json
from fractions import Fraction

import pytest

from src.models.report import Report, Verdict, VerdictStatus, WarningCode, render_value


class TestVerdict:
    def test_check(self):
        assert Verdict.check("a", True).status == VerdictStatus.PASS
        assert Verdict.check("a", False, Fraction(-3, 4)).value == "-3/4"

    def test_info(self):
        verdict = Verdict.info("conductor", [2, 2], detail="tacnode")
        assert verdict.status == VerdictStatus.INFO
        assert verdict.value == "(2, 2)"

    @pytest.mark.parametrize(
        "value,expected",
        [(None, None), (True, "true"), (Fraction(5), "5"), (Fraction(1, 3), "1/3"), ((Fraction(1, 2), 0), "(1/2, 0)"), ("x", "x")],
    )
    def test_render_value(self, value, expected):
        assert render_value(value) == expected


class TestReport:
    @pytest.fixture
    def report(self):
        return Report(
            command="check-balance",
            inputs_digest="sha256:abc",
            verdicts=[Verdict.check("edge:e1", True, Fraction(0)), Verdict.info("k", 1)],
        )

    def test_passed(self, report):
        assert report.passed
        report.verdicts.append(Verdict.check("edge:e2", False, Fraction(1)))
        assert not report.passed

    def test_skip_does_not_fail(self, report):
        report.verdicts.append(Verdict(name="08-conductor:e6", status=VerdictStatus.SKIP))
        assert report.passed

    def test_verdict_lookup(self, report):
        assert report.verdict("k").value == "1"
        with pytest.raises(KeyError):
            report.verdict("missing")

    def test_warn_deduplicates(self, report):
        report.warn(WarningCode.EVEN_K_RESIDUE, "k=2")
        report.warn(WarningCode.EVEN_K_RESIDUE, "k=2")
        report.warn(WarningCode.EVEN_K_RESIDUE, "k=4")
        assert len(report.warnings) == 2

    def test_render_text(self, report):
        report.emitted["C1"] = "1/z"
        report.warn(WarningCode.RES_KERNEL, "kernel 1 on VD, 0 on W")
        lines = report.render_text().splitlines()
        assert lines[0] == "command: check-balance"
        assert "[PASS] edge:e1 = 0" in lines
        assert "eta[C1] = 1/z" in lines
        assert "warning W-RES-KERNEL: kernel 1 on VD, 0 on W" in lines
        assert lines[-1] == "result: PASS"

    def test_render_json_is_stable(self, report):
        rendered = report.render_json()
        assert rendered == report.render_json()
        data = json.loads(rendered)
        assert data["verdicts"][0] == {"detail": None, "name": "edge:e1", "status": "pass", "value": "0"}
