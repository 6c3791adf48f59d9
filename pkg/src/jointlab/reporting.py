"""Report assembly and deterministic serialization.

JSON reports serialize every IEEE-754 double at 17 significant digits, which
round-trips bit-exactly, so two runs with the same configuration and seed
produce byte-identical files apart from the timestamp. CSV reports carry one
row per scalar check; shot archives are CSV with one outcome row per draw.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

__all__ = [
    "ARTIFACT_VERSION",
    "Report",
    "dumps_json",
    "report_to_json",
    "report_to_csv",
    "shots_csv_text",
    "write_report",
    "write_shots_csv",
    "make_timestamp",
]

ARTIFACT_VERSION = "0.1.0"


def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError("non-finite value in report")
    return format(x, ".17g")


def dumps_json(obj: Any, indent: int = 0) -> str:
    """Serialize nested dicts/lists/scalars with floats at 17 significant digits."""
    pad = " " * indent
    child = indent + 2
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        lines = [
            f"{' ' * child}{json.dumps(str(k))}: {dumps_json(v, child)}" for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(lines) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        lines = [f"{' ' * child}{dumps_json(v, child)}" for v in obj]
        return "[\n" + ",\n".join(lines) + f"\n{pad}]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    raise TypeError(f"cannot serialize {type(obj).__name__} into a report")


def make_timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(frozen=True)
class Report:
    """A run report: configuration echo, payload, and named pass/fail checks."""

    config_echo: Mapping[str, Any]
    results: Mapping[str, Any]
    checks: Sequence[Any]  # verify.Check instances
    artifact_version: str = ARTIFACT_VERSION
    timestamp: str = ""

    @property
    def pass_flags(self) -> dict[str, bool]:
        return {c.name: bool(c.passed) for c in self.checks}

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)


def report_to_json(report: Report) -> str:
    payload = {
        "artifact_version": report.artifact_version,
        "timestamp": report.timestamp,
        "config": dict(report.config_echo),
        "results": dict(report.results),
        "checks": [
            {
                "name": c.name,
                "value": c.value,
                "bound": c.bound,
                "tolerance": c.tolerance,
                "pass": c.passed,
            }
            for c in report.checks
        ],
        "pass_flags": report.pass_flags,
        "all_pass": report.all_pass,
    }
    return dumps_json(payload) + "\n"


def report_to_csv(report: Report) -> str:
    lines = ["name,value,bound,tolerance,pass"]
    for c in report.checks:
        lines.append(
            ",".join(
                [
                    c.name,
                    _format_float(c.value),
                    _format_float(c.bound),
                    _format_float(c.tolerance),
                    "true" if c.passed else "false",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def shots_csv_text(record) -> str:
    """Shot archive as CSV with columns (index, x_a, y_a, x_b, y_b)."""
    lines = ["index,x_a,y_a,x_b,y_b"]
    for i, row in enumerate(np.asarray(record.outcomes)):
        lines.append(f"{i},{row[0]},{row[1]},{row[2]},{row[3]}")
    return "\n".join(lines) + "\n"


def write_report(report: Report, path: str | Path, fmt: str = "json") -> None:
    """Write a report as JSON or CSV; raises OSError with the path on failure."""
    if fmt == "json":
        text = report_to_json(report)
    elif fmt == "csv":
        text = report_to_csv(report)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    Path(path).write_text(text, encoding="utf-8")


def write_shots_csv(record, path: str | Path) -> None:
    Path(path).write_text(shots_csv_text(record), encoding="utf-8")
