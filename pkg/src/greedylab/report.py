"""Check records, reports and their CSV/JSON serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"

# ints beyond this are written as hex strings; decimal conversion of the
# largest construction indices is refused by the interpreter
_INT_LIMIT = 1 << 63


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    bound: float
    relation: str  # "<=", ">=", "==", "<", ">"
    anchor: str
    status: str


def _compare(measured, bound, relation, tol):
    if relation == "<=":
        return measured <= bound + tol
    if relation == ">=":
        return measured >= bound - tol
    if relation == "<":
        return measured < bound
    if relation == ">":
        return measured > bound
    if relation == "==":
        return abs(measured - bound) <= tol
    raise ValueError(f"unknown relation {relation!r}")


def make_check(name: str, measured, bound, relation: str, anchor: str, tol: float = 0.0,
               inconclusive: bool = False) -> Check:
    """Status is decided by the recorded numbers alone."""
    if inconclusive:
        status = INCONCLUSIVE
    else:
        status = PASS if _compare(measured, bound, relation, tol) else FAIL
    return Check(name, measured, bound, relation, anchor, status)


@dataclass
class Report:
    experiment: str
    config: dict
    columns: tuple[str, ...]
    rows: list[dict] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    witnesses: list = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def status(self) -> str:
        states = {c.status for c in self.checks}
        if FAIL in states:
            return FAIL
        if INCONCLUSIVE in states:
            return INCONCLUSIVE
        return PASS

    @property
    def exit_code(self) -> int:
        return {PASS: 0, FAIL: 1, INCONCLUSIVE: 3}[self.status]

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "config": self.config,
            "status": self.status,
            "checks": [c.__dict__ for c in self.checks],
            "columns": list(self.columns),
            "rows": self.rows,
            "witnesses": self.witnesses,
        }

    def to_json(self) -> str:
        return json.dumps(plain(self.to_dict()), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([cell(row.get(col, "")) for col in self.columns])
        return buf.getvalue()

    def table(self) -> str:
        """Human-readable summary of the checks."""
        width = max((len(c.name) for c in self.checks), default=4)
        lines = [f"{self.experiment}: {self.status}"]
        for c in self.checks:
            lines.append(f"  [{c.status:>12}] {c.name:<{width}}  {cell(c.measured)} {c.relation} "
                         f"{cell(c.bound)}  ({c.anchor})")
        return "\n".join(lines)

    def write(self, out_dir) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = [out / f"{self.experiment}.csv", out / f"{self.experiment}.json"]
        paths[0].write_text(self.to_csv())
        paths[1].write_text(self.to_json())
        return paths


def cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return hex(value) if abs(value) >= _INT_LIMIT else str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def plain(obj):
    """JSON-safe copy: huge ints to hex, non-finite floats to strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return hex(obj) if abs(obj) >= _INT_LIMIT else obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else cell(obj)
    if isinstance(obj, dict):
        return {cell(k) if not isinstance(k, str) else k: plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    return str(obj)
