"""Machine-readable verification reports shared by the relation suites and the CLI."""
from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field


@dataclass
class Check:
    identity: str
    params: dict
    passed: bool
    witness: str | None = None
    detail: str | None = None


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, identity, params, passed, witness=None, detail=None) -> Check:
        c = Check(identity, dict(params), bool(passed), witness, detail)
        self.checks.append(c)
        return c

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)
        return self

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Report":
        return cls(data["suite"], [Check(**c) for c in data["checks"]])

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def text(self) -> str:
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            params = ", ".join(f"{k}={v}" for k, v in c.params.items())
            line = f"[{status}] {c.identity} ({params})"
            if c.detail:
                line += f": {c.detail}"
            if not c.passed and c.witness:
                line += f"\n        witness: {c.witness}"
            lines.append(line)
        ok = sum(c.passed for c in self.checks)
        lines.append(f"{self.suite}: {ok}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("HALLFOCK_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Order-preserving map, run on a thread pool capped by HALLFOCK_THREADS."""
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
