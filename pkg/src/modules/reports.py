"""Run documents: building, JSON emission and parsing, and human-readable text.

Documents are plain dicts of JSON types only, so ``parse_document`` inverts
``emit_document`` exactly.
"""

import json
import logging
from typing import Any, Dict, List, Optional

from config import TOOL_NAME, TOOL_VERSION
from modules.groups import FiniteGroup
from modules.search import TssClassReport
from modules.symmetric_sets import CandidateSet, TssCertificate

logger = logging.getLogger(__name__)


def build_document(command: str, config: Dict[str, Any], result: Any, success: bool) -> Dict[str, Any]:
    return {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "command": command,
        "config": config,
        "result": result,
        "success": bool(success),
    }


def emit_document(document: Dict[str, Any]) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_document(text: str) -> Dict[str, Any]:
    document = json.loads(text)
    missing = {"tool", "version", "command", "config", "result", "success"} - set(document)
    if missing:
        raise ValueError(f"Not a run document, missing {sorted(missing)}")
    return document


# --- serializers ---


def certificate_to_dict(certificate: TssCertificate, candidate: CandidateSet) -> Dict[str, Any]:
    group = candidate.group
    return {
        "candidate": candidate.notation(),
        "realized_group_order": certificate.realized_group_order,
        "witnesses": [
            {"swap": [i, j], "element": group.notation(g)} for (i, j), g in sorted(certificate.witnesses.items())
        ],
    }


def class_report_to_dict(report: TssClassReport, group: FiniteGroup) -> Dict[str, Any]:
    classes = []
    for entry in report.classes:
        candidate = CandidateSet(group, entry.representative)
        classes.append(
            {
                "representative": candidate.notation(),
                "orbit_size": entry.orbit_size,
                "certificate": certificate_to_dict(entry.certificate, candidate),
            }
        )
    result = {
        "group": report.group_label,
        "order": group.order,
        "k": report.k,
        "up_to_conjugacy": report.up_to_conjugacy,
        "complete": report.complete,
        "class_count": len(classes),
        "total_count": report.total_count,
        "classes": classes,
    }
    if report.members is not None:
        result["members"] = [[group.notation(y) for y in ys] for ys in report.members]
    return result


def hom_record_to_dict(record) -> Dict[str, Any]:
    return {"n": record.n, "m": record.m, "images": record.images, "tag": record.tag}


# --- human rendering ---


def _cell(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return " ".join(_cell(v) for v in value) if value else "-"
    if isinstance(value, dict):
        return ", ".join(f"{k}={_cell(v)}" for k, v in sorted(value.items()))
    if value is None:
        return "-"
    return str(value)


def render_table(rows: List[Dict[str, Any]], columns: Optional[List[str]] = None) -> List[str]:
    """Aligned text table of flat dicts."""
    if not rows:
        return ["  (none)"]
    columns = columns or [c for c in rows[0] if not isinstance(rows[0][c], (dict, list)) or c == "representative"]
    cells = [[_cell(row.get(c)) for c in columns] for row in rows]
    widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(columns)]
    lines = ["  " + "  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  " + "  ".join("-" * w for w in widths))
    lines += ["  " + "  ".join(v.ljust(w) for v, w in zip(r, widths)) for r in cells]
    return lines


def _render_value(key, value, indent) -> List[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = [f"{pad}{key}:"]
        for k in sorted(value):
            lines += _render_value(k, value[k], indent + 1)
        return lines
    if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        lines = [f"{pad}{key}:"]
        return lines + [pad + line for line in render_table(value)]
    return [f"{pad}{key}: {_cell(value)}"]


def render_human(document: Dict[str, Any]) -> str:
    status = "PASS" if document["success"] else "FAIL"
    lines = [f"{document['tool']} {document['version']} {document['command']}: {status}"]
    result = document["result"]
    if isinstance(result, dict):
        for key in sorted(result):
            lines += _render_value(key, result[key], 0)
    else:
        lines += _render_value("result", result, 0)
    return "\n".join(lines) + "\n"
