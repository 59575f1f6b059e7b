"""Verdicts and residual summaries shared by the verification routines."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from .chart import TensorField
from .expr import ExhaustedSamplingError, Expr, ZeroTestConfig, is_zero


class Verdict(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    UNKNOWN = "unknown"
    HYPOTHESIS_NOT_MET = "hypothesis_not_met"
    NOT_APPLICABLE = "not_applicable"

    @property
    def ok(self) -> bool:
        return self is Verdict.PASS


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a componentwise zero check.

    ``max_residual`` is the largest sampled magnitude over the checked
    components (0 when every component was proved zero symbolically).
    ``witness`` names the first failing component and sample point.
    """

    name: str
    verdict: Verdict
    max_residual: float = 0.0
    witness: dict[str, Any] | None = None
    detail: str = ""
    residual: TensorField | None = field(default=None, repr=False, compare=False)

    @property
    def ok(self) -> bool:
        return self.verdict.ok

    def __bool__(self):
        return self.ok

    def summary(self) -> dict[str, Any]:
        out = {"check": self.name, "verdict": self.verdict.value, "max_residual": self.max_residual}
        if self.witness:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        return out


def check_tensor(name: str, residual: TensorField, config: ZeroTestConfig, detail: str = "") -> CheckResult:
    """PASS iff every component of ``residual`` tests zero."""
    worst = 0.0
    try:
        for idx, e in residual.items():
            if e.is_zero_constant():
                continue
            v = is_zero(e, config=config)
            if not v:
                witness = {"index": list(idx), "point": dict(v.witness or {}), "value": v.value}
                return CheckResult(name, Verdict.FAIL, abs(v.value), witness, detail, residual)
            worst = max(worst, v.max_residual)
    except ExhaustedSamplingError as exc:
        return CheckResult(name, Verdict.UNKNOWN, worst, None, str(exc), residual)
    return CheckResult(name, Verdict.PASS, worst, None, detail, residual)


def check_scalar(name: str, e: Expr, config: ZeroTestConfig, detail: str = "") -> CheckResult:
    try:
        v = is_zero(e, config=config)
    except ExhaustedSamplingError as exc:
        return CheckResult(name, Verdict.UNKNOWN, 0.0, None, str(exc))
    if not v:
        return CheckResult(name, Verdict.FAIL, abs(v.value), {"point": dict(v.witness or {}), "value": v.value}, detail)
    return CheckResult(name, Verdict.PASS, v.max_residual, None, detail)
