"""CSV / JSON readers and writers.

Floats are written with ``repr`` (shortest round-trip form), which keeps
files byte-identical across runs and lossless on reload.
"""

import csv
import io
import json

import numpy as np

from .errors import ValidationError
from .mmspace import DiscreteMeasure, MetricMeasureSpace, space_from_matrix


def fmt(x):
    x = float(x)
    if x == 0.0:
        return "0.0"  # folds -0.0
    return repr(x)


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def parse_matrix_csv(text):
    """Parse a comma-separated matrix; a non-numeric first line is taken as a header."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    header = None
    if rows and not all(_is_number(c.strip()) for c in rows[0]):
        header, rows = [c.strip() for c in rows[0]], rows[1:]
    try:
        data = [[float(c) for c in r] for r in rows]
    except ValueError as exc:
        raise ValidationError(f"non-numeric CSV entry: {exc}") from None
    widths = {len(r) for r in data}
    if len(widths) > 1:
        raise ValidationError(f"ragged CSV rows (widths {sorted(widths)})")
    arr = np.array(data, dtype=float).reshape(len(data), widths.pop() if widths else 0)
    return arr, header


def read_matrix_csv(path):
    with open(path, newline="") as fh:
        return parse_matrix_csv(fh.read())


def format_matrix_csv(matrix, header=None):
    a = np.atleast_2d(np.asarray(matrix, dtype=float))
    lines = []
    if header:
        lines.append(",".join(header))
    for row in a:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_matrix_csv(path, matrix, header=None):
    with open(path, "w", newline="") as fh:
        fh.write(format_matrix_csv(matrix, header))


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return 0.0 if v == 0.0 else v
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj):
    return json.dumps(_plain(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(dumps(obj))


def space_to_json(space: MetricMeasureSpace):
    labels = [list(p) if isinstance(p, tuple) else p for p in space.points]
    return {
        "n": space.n,
        "dist": space.dist.entries.tolist(),
        "weights": space.weights.tolist(),
        "labels": labels,
    }


def space_from_json(obj):
    """Build a space from ``{"n", "dist", "weights", "labels"}``; weights/labels optional."""
    if not isinstance(obj, dict):
        raise ValidationError("space JSON must be an object")
    for key in ("n", "dist"):
        if key not in obj:
            raise ValidationError(f"space JSON missing field {key!r}")
    n = obj["n"]
    dist = np.asarray(obj["dist"], dtype=float)
    if dist.ndim == 1 and dist.size == n * n:
        dist = dist.reshape(n, n)
    if dist.shape != (n, n):
        raise ValidationError(f"field 'dist' has shape {dist.shape}, expected ({n}, {n})")
    weights = obj.get("weights")
    if weights is not None:
        weights = DiscreteMeasure(np.asarray(weights, dtype=float))
    labels = obj.get("labels")
    if labels is not None:
        labels = [tuple(p) if isinstance(p, list) else p for p in labels]
    return space_from_matrix(dist, weights, labels)


def read_space_json(path):
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}") from None
    return space_from_json(obj)


def report_to_csv(report):
    m = max((len(s.eigenvalue_gaps) for s in report.stages), default=0)
    header = ["label", "tv_distance", "aligned_residual"] + [f"gap_{i + 1}" for i in range(m)]
    lines = [",".join(header)]
    for s in report.stages:
        gaps = [fmt(g) for g in s.eigenvalue_gaps] + [""] * (m - len(s.eigenvalue_gaps))
        label = fmt(s.label) if isinstance(s.label, float) else str(s.label)
        lines.append(",".join([label, fmt(s.tv_distance), fmt(s.aligned_residual)] + gaps))
    return "\n".join(lines) + "\n"
