"""VerificationReport and its JSON / CSV / plain-text renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

CSV_HEADER = ("tau", "e", "sign", "mu", "lambda", "branch", "status")


@dataclass
class VerificationReport:
    claim_id: str
    parameter_range: str
    anchors: list[str]
    cases_checked: int = 0
    failures: list[dict] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "pass" if self.cases_checked > 0 and not self.failures else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def fail(self, kind: str, params: dict, expected, actual):
        self.failures.append({"kind": kind, "parameters": params, "expected": expected, "actual": actual})

    def to_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "range": self.parameter_range,
            "cases_checked": self.cases_checked,
            "skipped": self.skipped,
            "failures": self.failures,
            "verdict": self.verdict,
            "anchors": self.anchors,
            "details": self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=_jsonable, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_HEADER, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow(row)
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [
            f"{self.claim_id}: {self.verdict.upper()}",
            f"  range:   {self.parameter_range}",
            f"  checked: {self.cases_checked}   skipped: {len(self.skipped)}   failures: {len(self.failures)}",
        ]
        for key, value in self.details.items():
            lines.append(f"  {key}: {_short(value)}")
        for f in self.failures[:20]:
            lines.append(f"  FAIL [{f['kind']}] {f['parameters']} expected={f['expected']} actual={f['actual']}")
        if len(self.failures) > 20:
            lines.append(f"  ... {len(self.failures) - 20} more failures")
        return "\n".join(lines) + "\n"


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (set, frozenset, tuple)):
        return list(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _short(value) -> str:
    text = json.dumps(value, default=_jsonable)
    return text if len(text) <= 200 else text[:197] + "..."


def render(report: VerificationReport, fmt: str) -> str:
    if fmt == "json":
        return report.to_json()
    if fmt == "csv":
        return report.to_csv()
    return report.to_text()
