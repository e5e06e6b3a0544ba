"""Structured experiment records shared by the lab, counterexample and
benchmark code."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any


def strict_ratio(lhs: float, rhs: float) -> float:
    """lhs/rhs for a strict inequality lhs < rhs: equality maps above 1."""
    r = ratio(lhs, rhs)
    return r if r < 1.0 else max(r, math.nextafter(1.0, math.inf))


def ratio(lhs: float, rhs: float) -> float:
    """lhs/rhs with 0/0 = 0 and x/0 = inf."""
    if lhs == 0.0:
        return 0.0
    if rhs == 0.0:
        return math.inf
    return lhs / rhs


@dataclass
class ExperimentReport:
    """Outcome of a check.

    ``worst_ratio`` is the largest normalized LHS/RHS seen; the verdict is
    ``worst_ratio <= 1 + tolerance``.  Pure yes/no checks use 0 (pass) and
    inf (fail).
    """

    name: str
    parameters: dict[str, Any]
    samples: int
    worst_ratio: float
    tolerance: float = 0.0
    artifacts: list[dict[str, Any]] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return bool(self.worst_ratio <= 1.0 + self.tolerance)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "parameters": _jsonable(self.parameters),
            "samples": int(self.samples),
            "worst_ratio": _jsonable(self.worst_ratio),
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "summary": _jsonable(self.summary),
            "artifacts": _jsonable(self.artifacts),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def to_csv(self) -> str:
        rows = self.artifacts or [{"name": self.name, "samples": self.samples,
                                   "worst_ratio": self.worst_ratio, "verdict": self.verdict}]
        return rows_to_csv(rows)


def rows_to_csv(rows) -> str:
    """CSV with the union of keys as header; nested values are JSON-encoded."""
    rows = _jsonable(list(rows))
    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in row.items()})
    return buf.getvalue()


def _jsonable(obj):
    if hasattr(obj, "to_json") and hasattr(obj, "lo"):
        return obj.to_json()
    if hasattr(obj, "to_dict") and not isinstance(obj, dict):
        return obj.to_dict()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if hasattr(obj, "item"):
        return _jsonable(obj.item())
    return obj
