"""Verdict records shared by the validators and the axiom checks."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"


@dataclass
class CheckReport:
    """Outcome of one check.

    ``witness`` is a JSON-serialisable dict describing the first violation
    found; it carries a ``kind`` key that :func:`buildings.axiom_suite.replay`
    understands.  ``stats`` counts the cases examined.
    """

    name: str
    verdict: str = PASS
    witness: dict | None = None
    stats: dict = field(default_factory=dict)
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict != FAIL

    def fail(self, witness: dict, detail: str = "") -> "CheckReport":
        if self.verdict != FAIL:
            self.verdict = FAIL
            self.witness = witness
            self.detail = detail
        return self

    def count(self, key: str, n: int = 1):
        self.stats[key] = self.stats.get(key, 0) + n

    def to_dict(self) -> dict:
        out = {"name": self.name, "verdict": self.verdict, "stats": dict(sorted(self.stats.items()))}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        return out

    def line(self) -> str:
        cases = ", ".join(f"{k}={v}" for k, v in sorted(self.stats.items()))
        s = f"{self.name:<12} {self.verdict.upper():<15} {cases}"
        if self.verdict == FAIL:
            s += f"\n    witness: {json.dumps(self.witness, sort_keys=True)}"
            if self.detail:
                s += f"\n    {self.detail}"
        return s


def merge(name: str, reports) -> CheckReport:
    """Combine reports: fail if any fails, first failure's witness wins."""
    out = CheckReport(name)
    verdicts = set()
    for r in reports:
        verdicts.add(r.verdict)
        for k, v in r.stats.items():
            out.count(f"{r.name}.{k}", v)
        if r.verdict == FAIL and out.verdict != FAIL:
            out.fail(dict(r.witness or {}, check=r.name), r.detail)
    if verdicts == {NOT_APPLICABLE}:
        out.verdict = NOT_APPLICABLE
    return out


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"
