"""Pass/fail reports with replayable witnesses, shared by all checkers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: str = None
    details: dict = field(default_factory=dict)

    def to_json(self):
        out = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = {k: str(v) for k, v in self.details.items()}
        return out


@dataclass
class CongruenceReport:
    """Verdict plus per-check results; failures always carry a witness."""

    verdict: bool
    checks: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @staticmethod
    def from_checks(checks, meta=None):
        witnesses = [(c.name, c.witness) for c in checks if not c.passed]
        return CongruenceReport(verdict=all(c.passed for c in checks),
                                checks=list(checks), witnesses=witnesses,
                                meta=dict(meta or {}))

    @property
    def first_failure(self):
        for c in self.checks:
            if not c.passed:
                return c
        return None

    def add(self, check):
        self.checks.append(check)
        if not check.passed:
            self.verdict = False
            self.witnesses.append((check.name, check.witness))

    def to_json(self):
        return {"verdict": "pass" if self.verdict else "fail",
                "checks": [c.to_json() for c in sorted(self.checks, key=lambda c: c.name)],
                "witnesses": [{"check": n, "witness": str(w)} for n, w in self.witnesses],
                "meta": {k: str(v) for k, v in sorted(self.meta.items())}}

    def summary(self):
        n_pass = sum(1 for c in self.checks if c.passed)
        tag = "PASS" if self.verdict else "FAIL"
        lines = [f"[{tag}] {n_pass}/{len(self.checks)} checks passed"]
        for name, w in self.witnesses:
            lines.append(f"  witness ({name}): {w}")
        return "\n".join(lines)
