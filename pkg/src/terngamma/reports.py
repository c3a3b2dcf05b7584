"""Machine-readable command reports.

Reports are canonical JSON (sorted keys, two-space indent) and embed a
sha256 digest of every input file, so golden tests detect fixture drift.
Re-running a command on identical inputs and budgets yields byte-identical
JSON apart from the single ``timing_ms`` field.
"""

from __future__ import annotations

import json

from . import __version__
from .documents import canonical_json, sha256_of


def build_report(command: str, inputs, result: dict, exit_code: int,
                 budgets: dict | None = None, timing_ms: int | None = None) -> dict:
    report = {
        "command": command,
        "tool_version": __version__,
        "inputs": [
            {"path": str(p), "sha256": sha256_of(p)} for p in inputs
        ],
        "budgets": budgets or {},
        "result": result,
        "exit_code": exit_code,
    }
    if timing_ms is not None:
        report["timing_ms"] = timing_ms
    return report


def report_to_json(report: dict) -> str:
    return canonical_json(report)


def strip_timing(report_text: str) -> str:
    doc = json.loads(report_text)
    doc.pop("timing_ms", None)
    return canonical_json(doc)
