"""
JSON schema of run reports.

Exact values are "p/q" strings (integers without a denominator). A report is
validated before it is written.
"""

from jsonschema import Draft202012Validator

RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}

CHECK_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["check", "bigrade", "status", "witness", "values"],
    "properties": {
        "check": {"type": "string", "minLength": 1},
        "bigrade": {"type": "string"},
        "status": {"enum": ["pass", "fail", "error"]},
        "witness": {"type": ["string", "null"]},
        "values": {
            "type": "object",
            "additionalProperties": {
                "anyOf": [RATIONAL, {"type": "array", "items": RATIONAL}, {"type": "string"}],
            },
        },
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "derhamlab run report",
    "type": "object",
    "additionalProperties": False,
    "required": ["environment", "checks", "passed", "exit_status"],
    "properties": {
        "environment": {
            "type": "object",
            "additionalProperties": False,
            "required": ["mode", "seed", "degree", "epsilon", "geometry_hash", "family", "weighted"],
            "properties": {
                "mode": {"enum": ["verify", "betti", "bounds", "render", "all"]},
                "seed": {"type": "integer"},
                "degree": {"type": "integer", "minimum": 0},
                "epsilon": RATIONAL,
                "geometry": {"type": "string"},
                "geometry_hash": {"type": "string"},
                "family": {"enum": ["uniform", "graded"]},
                "weighted": {"type": "boolean"},
                "samples": {"type": "integer", "minimum": 0},
            },
        },
        "checks": {"type": "array", "items": CHECK_SCHEMA},
        "passed": {"type": "boolean"},
        "exit_status": {"enum": [0, 1, 2]},
    },
}

report_validator = Draft202012Validator(REPORT_SCHEMA)


def validate_report(document: dict) -> None:
    """Raises jsonschema.ValidationError on the first problem."""
    report_validator.validate(document)
