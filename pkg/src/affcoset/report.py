"""Canonical report serialization.

Reports are JSON with sorted keys, compact separators and rationals written
as strings, so equal inputs give byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction
from typing import Any

from . import __version__


def _plain(x: Any) -> Any:
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_plain(v) for v in x)
    if hasattr(x, "item") and callable(x.item):  # numpy scalars
        return x.item()
    return x


def canonical_json(obj: Any) -> str:
    return json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def digest(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def make_report(command: str, results: Any, instance: Any = None, seed: int | None = None,
                timing: dict | None = None) -> dict:
    rep = {
        "command": command,
        "instance_digest": digest(instance) if instance is not None else None,
        "results": results,
        "seed": seed,
        "tool_version": __version__,
    }
    if timing is not None:
        rep["timing"] = timing
    return rep


def dumps_report(report: dict) -> str:
    return canonical_json(report) + "\n"
