"""CSV/JSON tables for trajectories and pointwise tensors.

Floats are written with ``repr``: the shortest decimal that reads back to the
same double (at most 17 significant digits), so a parse reproduces the array
exactly.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

FORMATS = ("csv", "json")


def format_float(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x == 0.0:
        return "0.0" if np.copysign(1.0, x) > 0 else "-0.0"
    return repr(x)


def indexed(prefix, m):
    return [f"{prefix}{i + 1}" for i in range(m)]


def geodesic_columns(m):
    return ["t"] + indexed("x", m) + indexed("v", m)


def jacobi_columns(m):
    return geodesic_columns(m) + indexed("J", m) + indexed("Jdot", m) + indexed("nablaJ", m)


def csv_text(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_float(v) for v in row])
    return buf.getvalue()


def json_text(columns, rows, meta=None):
    doc = dict(meta or {})
    doc["columns"] = list(columns)
    doc["rows"] = [[int(v) if isinstance(v, (int, np.integer)) else float(v) for v in row] for row in rows]
    return json.dumps(doc, indent=1) + "\n"


def write_table(path, columns, rows, fmt="csv", meta=None):
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    text = csv_text(columns, rows) if fmt == "csv" else json_text(columns, rows, meta)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def read_csv(path):
    """``(columns, rows)`` with rows as a float array of shape ``(n, len(columns))``."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        columns = next(reader)
        rows = [[float(v) for v in r] for r in reader]
    return columns, np.array(rows, dtype=float).reshape(len(rows), len(columns))


def read_json(path):
    with open(path) as fh:
        doc = json.load(fh)
    return doc["columns"], np.array(doc["rows"], dtype=float).reshape(len(doc["rows"]), len(doc["columns"]))


def infer_format(path, fmt=None):
    if fmt:
        return fmt
    return "json" if str(path).lower().endswith(".json") else "csv"
