from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any


@dataclass
class Assertion:
    name: str
    expected: Any
    observed: Any
    passed: bool


@dataclass
class VerificationReport:
    """Pass/fail record of every checked assertion for one group.

    ``hypothesis_failure`` is set (and nothing else is asserted) when the
    input is outside the hypotheses of the check that produced the report.
    ``notes`` carries observations that are recorded but not asserted.
    """

    group_id: str
    n: int | None = None
    d: int | None = None
    assertions: list[Assertion] = field(default_factory=list)
    hypothesis_failure: str | None = None
    notes: dict[str, Any] = field(default_factory=dict)

    def check(self, name: str, expected: Any, observed: Any, passed: bool | None = None) -> bool:
        if passed is None:
            passed = expected == observed
        self.assertions.append(Assertion(name, expected, observed, bool(passed)))
        return bool(passed)

    @property
    def overall(self) -> bool:
        return self.hypothesis_failure is None and all(a.passed for a in self.assertions)

    @property
    def status(self) -> str:
        if self.hypothesis_failure is not None:
            return "hypothesis-failure"
        return "pass" if self.overall else "fail"

    def failures(self) -> list[Assertion]:
        return [a for a in self.assertions if not a.passed]

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["overall"] = self.overall
        d["status"] = self.status
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=str, ensure_ascii=False)

    def render_table(self) -> str:
        head = f"{self.group_id}: n={self.n} d={self.d} status={self.status}"
        lines = [head]
        if self.hypothesis_failure:
            lines.append(f"  hypothesis failure: {self.hypothesis_failure}")
        if self.assertions:
            w = max(len(a.name) for a in self.assertions)
            for a in self.assertions:
                mark = "ok  " if a.passed else "FAIL"
                lines.append(f"  {mark} {a.name:<{w}}  expected={a.expected}  observed={a.observed}")
        for k, v in self.notes.items():
            lines.append(f"  note {k}: {v}")
        return "\n".join(lines)
