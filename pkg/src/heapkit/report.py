"""Pass/fail reports shared by the verification routines."""
from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Report:
    suite: str
    checks: int = 0
    failures: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, relation: str, witness=None) -> bool:
        self.checks += 1
        if not ok:
            self.failures.append({"relation": relation, "status": "fail", "witness": _plain(witness)})
        return ok

    def merge(self, other: "Report") -> "Report":
        self.checks += other.checks
        self.failures.extend(other.failures)
        for k, v in other.meta.items():
            self.meta.setdefault(k, v)
        return self

    def relations(self):
        return sorted({f["relation"] for f in self.failures})

    def to_dict(self):
        d = {"suite": self.suite, "passed": self.passed, "checks": self.checks,
             "failures": self.failures}
        if self.meta:
            d["meta"] = _plain(self.meta)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def __bool__(self):
        return self.passed


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_plain(v) for v in x)
    return x
