"""
Verdict reports for HOObs
"""

import json
from typing import Any, Dict, List, Sequence

from automata.errors import ValidationError
from verification.verifier import Verdict

REPORT_FORMATS = ("text", "json")


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, (set, frozenset)):
        return sorted(_jsonable(item) for item in value)
    return value


def verdict_to_dict(verdict: Verdict, state_names: Sequence[str]) -> Dict[str, Any]:
    witness = verdict.witness
    entry: Dict[str, Any] = {
        "property": verdict.property_name,
        "holds": verdict.holds,
        "witness": None,
        "state": None,
        "estimate": None,
        "stats": _jsonable(verdict.stats),
    }
    if witness is not None:
        entry["witness"] = {"labels": list(witness.labels), "word": witness.word}
        entry["state"] = witness.rendered
        if witness.estimate is not None:
            entry["estimate"] = witness.estimate.to_names(state_names)
    return entry


def emit_report(verdicts: Sequence[Verdict], fmt: str = "text", state_names: Sequence[str] = ()) -> str:
    """
    Render verdicts as aligned text or as a JSON list

    An empty verdict list gives an empty report.
    """
    if fmt not in REPORT_FORMATS:
        raise ValidationError(f"Unknown report format {fmt!r}, expected one of {REPORT_FORMATS}")
    if not verdicts:
        return ""
    if fmt == "json":
        return json.dumps([verdict_to_dict(v, state_names) for v in verdicts],
                          indent=2, ensure_ascii=False) + "\n"

    rows: List[List[str]] = []
    for verdict in verdicts:
        witness = verdict.witness
        rows.append([
            verdict.property_name,
            "holds" if verdict.holds else "VIOLATED",
            "" if witness is None else (witness.word or "ε"),
            "" if witness is None else witness.rendered,
        ])
    widths = [max(len(row[column]) for row in rows) for column in range(3)]
    lines = []
    for row in rows:
        cells = [row[column].ljust(widths[column]) for column in range(3)] + [row[3]]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"
