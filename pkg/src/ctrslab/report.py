"""JSON reports for oracle runs."""

from __future__ import annotations

import json
import platform
from typing import Dict, Optional

from ctrslab import __version__, kernels
from ctrslab.oracle import CheckReport


def versions() -> Dict[str, str]:
    return {"ctrslab": __version__, "python": platform.python_version(), "kernels": kernels.BACKEND}


def report_dict(system: str, method: str, report: CheckReport) -> dict:
    return {
        "system": system,
        "method": method,
        "verdict": report.verdict,
        "probes": [p.as_dict() for p in report.probes],
        "versions": versions(),
    }


def corpus_dict(reports: Dict[str, CheckReport], method: str = "all") -> dict:
    systems = [report_dict(name, method, r) for name, r in reports.items()]
    verdicts = {s["verdict"] for s in systems}
    overall = "verified"
    for v in ("refuted", "unverified-caps"):
        if v in verdicts:
            overall = v
            break
    return {"systems": systems, "verdict": overall, "versions": versions()}


def dump(obj: dict, path: Optional[str] = None) -> str:
    text = json.dumps(obj, indent=2, ensure_ascii=False)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text
