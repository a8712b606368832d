import json
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from ..exactnum import format_rational


class WarningCode(str, Enum):
    EVEN_K_RESIDUE = "W-EVEN-K-RESIDUE"
    GLOBAL_CONDITION_AUTOMATIC = "W-GLOBAL-CONDITION-AUTOMATIC"
    CONDUCTOR_COUNT = "W-CONDUCTOR-COUNT"
    RES_KERNEL = "W-RES-KERNEL"
    CUSP_EX2_CONFLICT = "W-CUSP-EX2-CONFLICT"
    TACNODE_PARAMETRIZATION = "W-TACNODE-PARAMETRIZATION"
    NONRATIONAL_SKIPPED = "W-NONRATIONAL-SKIPPED"


class VerdictStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INFO = "info"
    SKIP = "skip"


class Verdict(BaseModel):
    name: str = Field(..., description="Stable verdict name")
    status: VerdictStatus = Field(..., description="pass / fail / info / skip")
    value: Optional[str] = Field(None, description="Exact value, rationals rendered as p/q")
    detail: Optional[str] = Field(None, description="Human-readable context")

    @classmethod
    def check(cls, name: str, passed: bool, value: Any = None, detail: Optional[str] = None) -> "Verdict":
        return cls(name=name, status=VerdictStatus.PASS if passed else VerdictStatus.FAIL, value=render_value(value), detail=detail)

    @classmethod
    def info(cls, name: str, value: Any, detail: Optional[str] = None) -> "Verdict":
        return cls(name=name, status=VerdictStatus.INFO, value=render_value(value), detail=detail)


class ReportWarning(BaseModel):
    code: WarningCode = Field(..., description="Stable, greppable identifier")
    message: str = Field(..., description="What disagreed")


class Report(BaseModel):
    command: str = Field(..., description="Command that produced the report")
    inputs_digest: str = Field(..., description="sha256 of the canonical input document and options")
    verdicts: List[Verdict] = Field(default_factory=list)
    warnings: List[ReportWarning] = Field(default_factory=list)
    emitted: Dict[str, str] = Field(default_factory=dict, description="Emitted differentials, by component id")

    @property
    def passed(self) -> bool:
        return all(v.status != VerdictStatus.FAIL for v in self.verdicts)

    def verdict(self, name: str) -> Verdict:
        for v in self.verdicts:
            if v.name == name:
                return v
        raise KeyError(name)

    def warn(self, code: WarningCode, message: str) -> None:
        if all(w.code != code or w.message != message for w in self.warnings):
            self.warnings.append(ReportWarning(code=code, message=message))

    def render_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def render_text(self) -> str:
        lines = [f"command: {self.command}", f"inputs: {self.inputs_digest}"]
        for v in self.verdicts:
            line = f"[{v.status.value.upper():4}] {v.name}"
            if v.value is not None:
                line += f" = {v.value}"
            if v.detail:
                line += f"  ({v.detail})"
            lines.append(line)
        for component_id, text in sorted(self.emitted.items()):
            lines.append(f"eta[{component_id}] = {text}")
        for w in self.warnings:
            lines.append(f"warning {w.code.value}: {w.message}")
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


def render_value(value: Any) -> Optional[str]:
    if value is None:
        return None
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(render_value(v) for v in value) + ")"
    return str(value)
