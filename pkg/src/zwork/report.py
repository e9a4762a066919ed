"""Machine-readable reports: a versioned JSON schema with deterministic output.

A report is ``{"schema", "command", "inputs", "digest", "checks", "status",
"exit_code", "timing"}``.  Each check carries ``status`` in
``pass | fail | inconclusive``; an inconclusive check must carry a
``reason``.  Keys are sorted and timing is ``null`` unless requested, so
identical inputs give byte-identical output.
"""

from __future__ import annotations

import hashlib
import json
from enum import Enum
from fractions import Fraction

from .exact import DualScalar
from .status import Status

SCHEMA_VERSION = "zwork-report/1"

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "command", "inputs", "digest", "checks", "status", "exit_code", "timing"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "digest": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "status": {"enum": ["pass", "fail", "inconclusive"]},
        "exit_code": {"enum": [0, 1, 2]},
        "timing": {"type": ["object", "null"]},
        "checks": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["status"],
                "properties": {"status": {"enum": ["pass", "fail", "inconclusive"]}},
                "if": {"properties": {"status": {"const": "inconclusive"}}},
                "then": {"required": ["status", "reason"]},
            },
        },
    },
}


def jsonable(x):
    """Convert nested results (statuses, exact scalars, tuples, int keys) to JSON values."""
    if isinstance(x, Status):
        return x.value
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(jsonable(v) for v in x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, (DualScalar, Fraction)):
        return str(x)
    return str(x)


def digest(payload: dict) -> str:
    return hashlib.sha256(json.dumps(jsonable(payload), sort_keys=True).encode()).hexdigest()


def exit_code(status: Status) -> int:
    return {Status.TRUE: 0, Status.FALSE: 1, Status.INCONCLUSIVE: 2}[status]


def make_report(command: str, inputs: dict, checks: dict, timing=None) -> dict:
    for name, chk in checks.items():
        if "status" not in chk:
            raise ValueError(f"check {name!r} has no status")
        if chk["status"] is Status.INCONCLUSIVE and not chk.get("reason"):
            raise ValueError(f"inconclusive check {name!r} carries no reason")
    overall = Status.combine(c["status"] for c in checks.values()) if checks else Status.INCONCLUSIVE
    report = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "digest": digest(inputs),
        "checks": checks,
        "status": overall,
        "exit_code": exit_code(overall),
        "timing": timing,
    }
    return jsonable(report)


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def validate_report(report: dict) -> None:
    import jsonschema

    jsonschema.validate(report, REPORT_SCHEMA)
