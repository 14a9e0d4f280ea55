"""Experiment reports: measured quantities, threshold checks, hygiene.

Reports serialize to JSON with sorted keys.  Exact probabilities are
written as ``"p/q"`` strings so exact-mode reports are byte-identical
between runs; wall time is kept on the object but left out of the JSON.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

NORM_TOL = 1e-10
MASS_TOL = 1e-9


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, bytes):
        return value.decode(errors="backslashreplace")
    if isinstance(value, dict):
        return {str(_plain(k)): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [_plain(v) for v in value]
        return sorted(items, key=repr) if isinstance(value, (set, frozenset)) else items
    if hasattr(value, "item") and callable(value.item):
        return value.item()
    return value


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


class Recorder:
    """Collects what an experiment measures while it runs."""

    def __init__(self):
        self.measured: dict = {}
        self.checks: list[Check] = []
        self.rows: list[dict] = []
        self.executions = 0
        self.max_norm_error = 0.0
        self.max_mass_error = Fraction(0)
        self.timeouts = 0

    def measure(self, key: str, value) -> None:
        self.measured[key] = value

    def check(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def row(self, **fields) -> None:
        self.rows.append(fields)

    def hygiene(self, dist) -> None:
        """Account for one exact distribution."""
        self.executions += dist.branches
        self.max_norm_error = max(self.max_norm_error, dist.max_norm_error)
        self.max_mass_error = max(self.max_mass_error, abs(Fraction(dist.total()) - 1))

    def hygiene_runs(self, records) -> None:
        """Account for sampled executions."""
        for res in records:
            self.executions += 1
            self.max_norm_error = max(self.max_norm_error, res.norm_error)
            self.timeouts += res.timed_out

    def hygiene_summary(self) -> dict:
        return {
            "executions": self.executions,
            "max_norm_error": self.max_norm_error,
            "max_mass_error": float(self.max_mass_error),
            "norm_ok": self.max_norm_error <= NORM_TOL,
            "mass_ok": self.max_mass_error <= MASS_TOL,
            "timeouts": self.timeouts,
        }


@dataclass
class ExperimentReport:
    experiment: str
    criterion: int
    config: dict
    measured: dict
    checks: list[Check]
    hygiene: dict
    rows: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    @classmethod
    def from_recorder(cls, experiment, criterion, config, rec: Recorder, wall_time: float) -> "ExperimentReport":
        return cls(experiment, criterion, config, rec.measured, list(rec.checks),
                   rec.hygiene_summary(), list(rec.rows), wall_time)

    @property
    def hygiene_ok(self) -> bool:
        return bool(self.hygiene["norm_ok"] and self.hygiene["mass_ok"])

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and self.hygiene_ok

    def failed_checks(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return _plain({
            "experiment": self.experiment,
            "criterion": self.criterion,
            "config": self.config,
            "measured": self.measured,
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
            "hygiene": self.hygiene,
            "passed": self.passed,
        })

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        columns: list[str] = []
        for row in self.rows:
            columns += [k for k in row if k not in columns]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow({k: _plain(v) for k, v in row.items()})
        return buf.getvalue()

    def summary_lines(self) -> list[str]:
        lines = [f"{self.experiment}: {'PASS' if self.passed else 'FAIL'} ({self.wall_time:.1f} s)"]
        for c in self.checks:
            lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
        h = self.hygiene
        lines.append(f"  [{'ok' if self.hygiene_ok else 'FAIL'}] hygiene: {h['executions']} executions, "
                     f"max norm error {h['max_norm_error']:.1e}, max mass error {h['max_mass_error']:.1e}")
        return lines
