"""Structured reports with byte-stable JSON output."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List

import numpy as np

from . import __version__


def format_float(x: float) -> str:
    """12 significant digits, lowercase scientific; non-finite values become strings."""
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return "%.11e" % (x + 0.0)


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with insertion-ordered keys and fixed float formatting."""
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, Fraction):
        return json.dumps(str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [dumps(v, indent, _level + 1) for v in obj]
        if all("\n" not in p for p in parts) and sum(len(p) for p in parts) < 72:
            return "[" + ", ".join(parts) + "]"
        return "[\n" + ",\n".join(inner + p for p in parts) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class Report:
    command: str
    inputs: dict
    results: dict = field(default_factory=dict)
    checks: List[dict] = field(default_factory=list)
    version: str = __version__

    def check(self, name: str, passed: bool, value: Any = None) -> bool:
        self.checks.append({"name": name, "pass": bool(passed), "value": value})
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "checks": self.checks,
            "version": self.version,
        }

    def dumps(self) -> str:
        return dumps(self.to_json()) + "\n"

    def render_text(self) -> str:
        lines = [f"{self.command} {' '.join(f'{k}={_short(v)}' for k, v in self.inputs.items())}".rstrip()]
        for key, value in self.results.items():
            lines.append(f"  {key}: {_short(value)}")
        for c in self.checks:
            status = "PASS" if c["pass"] else "FAIL"
            tail = "" if c["value"] is None else f" ({_short(c['value'])})"
            lines.append(f"  [{status}] {c['name']}{tail}")
        return "\n".join(lines) + "\n"


def _short(value: Any) -> str:
    text = dumps(value, indent=0).replace("\n", " ")
    return text if len(text) <= 160 else text[:157] + "..."
