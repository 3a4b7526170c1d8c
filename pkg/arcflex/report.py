from .io import format_float
import hashlib
import json
import math
import numpy as np


class AnalysisReport():
    """Machine-readable summary of an analysis.

    Sections are kept in insertion order; :meth:`dumps` renders them with
    fixed key order and 17 significant digits per float, so identical
    inputs give identical bytes.

    Args:

        tool_version (string):
            Version of the tool that produced the report.

        input_digest (string, optional):
            SHA-256 of the input bytes.
    """

    def __init__(self, tool_version, input_digest=None):

        self.sections = {
            "tool": {"name": "arcflex", "version": tool_version}
        }
        if input_digest is not None:
            self.sections["input_sha256"] = input_digest

    def add(self, name, content):

        assert name not in self.sections, f"Section {name} exists already"
        self.sections[name] = content

    def dumps(self):
        return dumps(self.sections) + "\n"


def summarize_framework(framework):

    return {
        "vertices": framework.num_vertices,
        "edges": framework.num_edges,
        "dimension": framework.dimension,
        "pins": framework.num_pinned
    }


def summarize_path(samples):

    max_abs = samples.max_abs_elongation()

    return {
        "samples": len(samples),
        "s_final": float(samples.arclengths[-1]),
        "max_residual": float(np.max(max_abs)),
        "truncated": bool(samples.truncated),
        "truncation_reason":
            samples.log.truncation_reason if samples.log else None
    }


def digest(data):
    """SHA-256 hex digest of input bytes."""

    return hashlib.sha256(data).hexdigest()


def dumps(value, indent=0):
    """Render `value` as JSON: dictionaries keep their insertion order,
    floats get 17 significant digits and non-finite floats become
    ``null``."""

    pad = "  " * (indent + 1)
    end = "  " * indent

    if value is None or isinstance(value, (bool, np.bool_)):
        return json.dumps(None if value is None else bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return format_float(value) if math.isfinite(value) else "null"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(key))}: {dumps(item, indent + 1)}"
            for key, item in value.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        if len(value) == 0:
            return "[]"
        items = [f"{pad}{dumps(item, indent + 1)}" for item in value]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"

    raise TypeError(f"can't render {type(value).__name__} as JSON")
