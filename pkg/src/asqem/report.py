"""Structured run reports.

One canonical JSON schema ("asqem-report/1", documented in the README)
covers both embedding schemes: inputs, per-iteration history, final
energies, correction metrics, invariant-check outcomes, and versions.
Numeric fields survive a read back exactly (floats are serialized with
full repr fidelity).
"""

from __future__ import annotations

import json
import platform
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import scipy

from . import __version__

__all__ = ["RunReport", "write_report", "read_report"]

SCHEMA = "asqem-report/1"


def _versions() -> dict:
    return {
        "asqem": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


@dataclass
class RunReport:
    scheme: str                       # "hf-embed" | "dft-embed" | "sweep-mu"
    status: str                       # "ok" | "not_converged" | "failed"
    inputs: dict
    result: dict
    history: list = field(default_factory=list)
    metrics: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    error: str | None = None

    def to_document(self) -> dict:
        return {
            "schema": SCHEMA,
            "created_at": datetime.now(timezone.utc).isoformat(),
            "scheme": self.scheme,
            "status": self.status,
            "inputs": self.inputs,
            "result": self.result,
            "history": self.history,
            "metrics": self.metrics,
            "checks": self.checks,
            "error": self.error,
            "versions": _versions(),
        }


def write_report(report: RunReport, path: str | Path) -> dict:
    doc = report.to_document()
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return doc


def read_report(path: str | Path) -> dict:
    doc = json.loads(Path(path).read_text())
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unknown report schema {doc.get('schema')!r}")
    return doc
