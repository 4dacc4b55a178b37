"""Deterministic report JSON.

Identical scene and flags must produce byte-identical output, so floats are
rendered with 17 significant digits through a fixed serializer instead of
``json.dumps`` (whose float formatting is shortest-round-trip) and all keys
are emitted in construction order.
"""

import numbers

from . import __version__

__all__ = ["dumps", "classify_report", "verify_report"]


def _fmt_float(x):
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"non-finite value {x!r} in report")
    text = format(float(x), ".17g")
    return text


def _emit(obj, out):
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(obj, numbers.Integral):
        out.append(str(int(obj)))
    elif isinstance(obj, numbers.Real):
        out.append(_fmt_float(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            _emit(str(k), out)
            out.append(":")
            _emit(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _emit(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} in report")


def dumps(obj):
    out = []
    _emit(obj, out)
    out.append("\n")
    return "".join(out)


def _header(command, scene, path):
    return {
        "tool": {"name": "affsurf4", "version": __version__},
        "command": command,
        "input": {"path": str(path), "sha256": scene.digest},
        "grid": {"u": [scene.u_range[0], scene.u_range[1]],
                 "v": [scene.v_range[0], scene.v_range[1]],
                 "counts": [scene.counts[0], scene.counts[1]]},
        "tolerances": {"rank": scene.tol_rank, "residual": scene.tol_residual},
        "jet_order": scene.jet_order,
    }


def _sorted_points(points):
    return sorted(points, key=lambda p: (p["u"], p["v"]))


def classify_report(scene, path, points, exceptional):
    """Report for a classification run.

    ``points`` are dicts {u, v, type, phi}; ``exceptional`` are dicts
    {u, v, reason} for grid points that could not be evaluated.
    """
    points = _sorted_points(points)
    exceptional = _sorted_points(exceptional)
    counts = {}
    for p in points:
        counts[p["type"]] = counts.get(p["type"], 0) + 1
    total = len(points) + len(exceptional)
    dominant = max(sorted(counts), key=lambda t: counts[t]) if counts else None
    doc = _header("classify", scene, path)
    doc["summary"] = {
        "dominant_type": dominant,
        "type_counts": {k: counts[k] for k in sorted(counts)},
        "degenerate_fraction": (len(exceptional) / total) if total else 1.0,
        "exceptional_points": exceptional,
    }
    doc["points"] = points
    return doc


def verify_report(scene, path, checks, points, exceptional, type_counts, passed):
    """Report for a verification run; ``checks`` maps check name to the
    maximum residual over the grid (the per-point records carry the rest)."""
    points = _sorted_points(points)
    exceptional = _sorted_points(exceptional)
    total = len(points) + len(exceptional)
    doc = _header("verify-family", scene, path)
    doc["summary"] = {
        "checks": {k: checks[k] for k in sorted(checks)},
        "max_residual": max(checks.values()) if checks else None,
        "type_counts": {k: type_counts[k] for k in sorted(type_counts)},
        "degenerate_fraction": (len(exceptional) / total) if total else 1.0,
        "exceptional_points": exceptional,
        "pass": passed,
    }
    doc["points"] = points
    return doc
