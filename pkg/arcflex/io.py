from .errors import SchemaError
from .framework import build_framework
import csv
import json


def read_framework(framework_path, tolerances=None):
    """Read and validate a framework from a JSON file.

    Args:

        framework_path (string):
            Path to a JSON file with a top-level object ``{"dimension": 2 or
            3, "vertices": [{"id", "coords", "pinned"}], "edges": [{"u", "v",
            "length" (optional)}]}``.

        tolerances (:class:`Tolerances`, optional):
            Tolerances for the pin and prestress checks.

    Returns:

        A :class:`Framework`. Raises :class:`ValidationError` on invalid
        input and `OSError` if the file can't be read.
    """

    with open(framework_path, 'r') as f:
        text = f.read()

    try:
        description = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"not valid JSON: {e}")

    return build_framework(description, tolerances)


def write_framework(framework, framework_path):
    """Write a framework in the format read by :func:`read_framework`."""

    with open(framework_path, 'w') as f:
        json.dump(framework.describe(), f, indent=2)
        f.write("\n")


def write_path(samples, csv_path):
    """Write path samples to a CSV file.

    One row per sample with columns ``t``, ``s``, ``max_abs_D`` and the free
    coordinates ``<vertex_id>.<axis>``, all with 17 significant digits.
    """

    header = ["t", "s", "max_abs_D"] + samples.framework.coordinate_labels()
    max_abs = samples.max_abs_elongation()

    with open(csv_path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for t, s, D, X in zip(
                samples.ts,
                samples.arclengths,
                max_abs,
                samples.configurations):
            writer.writerow([format_float(v) for v in (t, s, D, *X)])


def read_path(csv_path):
    """Read a path CSV written by :func:`write_path`.

    Returns:

        The column labels and a list of rows of floats.
    """

    with open(csv_path, 'r', newline='') as f:
        reader = csv.reader(f)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]

    return header, rows


def format_float(value):
    return format(float(value), '.17g')
