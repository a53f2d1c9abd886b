"""Check reports: a pass/fail status plus the witnesses behind a failure."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass
class Report:
    check: str
    passed: bool = True
    witnesses: List[Dict[str, Any]] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)
    code: str = ""

    def fail(self, code: str = "PropertyFailure", **witness):
        self.passed = False
        if not self.code:
            self.code = code
        self.witnesses.append(witness)
        return self

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def __bool__(self):
        return self.passed

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"check": self.check, "status": self.status}
        if self.code:
            out["code"] = self.code
        out["witnesses"] = self.witnesses
        if self.data:
            out["data"] = self.data
        return out
