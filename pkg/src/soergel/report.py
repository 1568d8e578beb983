"""Check reports shared by the verification entry points and the CLI."""
from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    witness: str = ""
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "witness": self.witness,
                "seconds": round(self.seconds, 3)}


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, witness: str = "", seconds: float = 0.0) -> Check:
        c = Check(name, bool(passed), witness, seconds)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness, c.seconds))

    @contextmanager
    def timed(self, name: str):
        """Record a check; the body sets ``box['passed']`` and optionally ``box['witness']``."""
        box = {"passed": False, "witness": ""}
        t0 = time.perf_counter()
        try:
            yield box
        except Exception as exc:  # a crashing check is a failing check
            box["passed"] = False
            box["witness"] = f"{type(exc).__name__}: {exc}"
        self.add(name, box["passed"], str(box["witness"]), time.perf_counter() - t0)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"title": self.title, "ok": self.ok, "checks": [c.to_json() for c in self.checks]}

    def render(self) -> str:
        lines = [self.title]
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            extra = f"  [{c.witness}]" if c.witness and not c.passed else ""
            lines.append(f"  {mark}  {c.name}  ({c.seconds:.2f}s){extra}")
        lines.append(f"{'OK' if self.ok else 'FAILED'}: {sum(c.passed for c in self.checks)}/{len(self.checks)} checks")
        return "\n".join(lines)
