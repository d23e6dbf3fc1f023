# run_report.py
"""
Deterministic Reports for soficlab

PURPOSE:
Every CLI command produces one Report: the tool version, a digest of the
input bytes, the command, the verdicts and the witnesses. The JSON form is
the primary artifact; the text form is a DERIVED rendering of the same
dictionary.

IMPORTANT DESIGN PRINCIPLES:
- Reports are byte-identical across runs for identical input, flags and
  version. Keys are sorted, Fractions render as "p/q", and nothing
  run-specific (run ids, wall-clock times) enters the JSON unless
  `--timing` asks for it.
- Report persistence is NON-BLOCKING: a failed save prints a warning
  and the command still exits normally.
"""

import hashlib
import json
import os
import sys
from dataclasses import dataclass, field, fields, is_dataclass
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from config import TOOL_VERSION


# --------------------------------------------------
# Data structures
# --------------------------------------------------

@dataclass
class Report:
    """Top-level audit artifact of one command."""
    command: str
    input_digest: Optional[str]
    verdicts: dict[str, Any] = field(default_factory=dict)
    witnesses: dict[str, Any] = field(default_factory=dict)
    config: dict[str, Any] = field(default_factory=dict)
    # "complete", or "partial" when a resource cap cut the work short
    status: str = "complete"
    errors: list[str] = field(default_factory=list)
    timing: Optional[dict[str, float]] = None
    tool_version: str = TOOL_VERSION


def input_digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


# --------------------------------------------------
# Report serialization
# --------------------------------------------------

def to_jsonable(obj: Any) -> Any:
    """
    Recursively convert dataclasses, Fractions, numpy scalars, tuples and
    sets into JSON-ready values. Sets become sorted lists.
    """
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(to_jsonable(v) for v in obj)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    return obj


def report_to_json(report: Report) -> str:
    """Serialize a Report; identical inputs give identical bytes."""
    data = to_jsonable(report)
    if data.get("timing") is None:
        del data["timing"]
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _render(value: Any, indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                _render(v, indent + 1, lines)
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, dict) and v:
                lines.append(f"{pad}-")
                _render(v, indent + 1, lines)
            else:
                lines.append(f"{pad}- {_scalar(v)}")


def _scalar(v: Any) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (dict, list)):
        return "(none)"
    return str(v)


def report_to_text(report: Report) -> str:
    """
    Human-readable rendering derived from the JSON dictionary.
    """
    data = json.loads(report_to_json(report))
    lines = [f"soficlab {data.pop('command')} report (v{data.pop('tool_version')})"]
    digest = data.pop("input_digest", None)
    if digest:
        lines.append(f"input: {digest}")
    lines.append(f"status: {data.pop('status')}")
    for section in ("verdicts", "witnesses", "config", "errors", "timing"):
        content = data.get(section)
        if not content:
            continue
        lines.append("")
        lines.append(f"[{section}]")
        _render(content, 1, lines)
    return "\n".join(lines) + "\n"


# --------------------------------------------------
# Report persistence
# --------------------------------------------------

def save_report(report: Report, path: str) -> Optional[str]:
    """
    Write the JSON report to `path`.

    This function NEVER raises; failures print a warning and return None.
    """
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(report_to_json(report))
        return path
    except Exception as e:
        print(f"  [Report] failed to save report to {path} (non-blocking): {e}", file=sys.stderr)
        return None
