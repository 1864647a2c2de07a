"""Deterministic JSON and CSV output."""

from __future__ import annotations

import csv
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Sequence

from .config import SCHEMA_VERSION
from .functionals import VerificationReport

REPORT_FIELDS = (
    "theorem",
    "p",
    "lhs",
    "rhs_sharpened",
    "rhs_classic",
    "alpha",
    "satisfied",
    "margin",
    "quad_error",
    "direction",
    "status",
    "lhs_unrooted",
    "rhs_unrooted",
)


def format_float(value: float) -> str:
    """17 significant digits; non-finite values use the JSON extensions."""
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    return format(value, ".17g")


def render_json(value: Any, indent: int = 0) -> str:
    """Render with insertion-ordered keys and fixed float formatting."""
    pad = "  " * (indent + 1)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(key))}: {render_json(item, indent + 1)}"
            for key, item in value.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{pad}{render_json(item, indent + 1)}" for item in value]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    if hasattr(value, "item"):
        return render_json(value.item(), indent)
    raise TypeError(f"Cannot render {type(value).__name__} as JSON.")


def report_payload(report: VerificationReport) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"schema_version": SCHEMA_VERSION}
    for name in REPORT_FIELDS:
        payload[name] = getattr(report, name)
    payload["mc"] = report.mc
    payload["details"] = report.details
    return payload


def write_text(text: str, path: Path | None) -> None:
    """Write to ``path`` or stdout when no path is given."""
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def emit_report(report: VerificationReport, path: Path | None) -> None:
    write_text(render_json(report_payload(report)) + "\n", path)


def emit_json(payload: Dict[str, Any], path: Path | None) -> None:
    write_text(render_json({"schema_version": SCHEMA_VERSION, **payload}) + "\n", path)


def write_csv(path: Path | None, rows: List[Dict[str, Any]], fieldnames: Sequence[str]) -> None:
    if path is None:
        writer = csv.DictWriter(sys.stdout, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)


__all__ = [
    "REPORT_FIELDS",
    "emit_json",
    "emit_report",
    "format_float",
    "render_json",
    "report_payload",
    "write_csv",
]
