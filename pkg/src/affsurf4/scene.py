"""Scene files: JSON documents describing a surface and a verification grid.

Schema (expressions are strings in the package's expression language):

    {
      "kind": "family" | "general",
      "family": {                      # when kind == "family"
        "type": "I1" | "I2" | "II",
        "gamma": [e1, e2, e3, e4],     # I1, I2
        "epsilon": 1 | -1,             # I2 only
        "alpha": [...], "beta": [...]  # II
      },
      "surface": {                     # when kind == "general"
        "x": [e1, e2, e3, e4],
        "xi1": [...], "xi2": [...]     # optional transversal fields
      },
      "grid": {"u": [u0, u1], "v": [v0, v1], "counts": [nu, nv]},
      "tolerances": {"rank": 1e-9, "residual": 1e-8},   # optional
      "jet_order": 6                                     # optional
    }
"""

import hashlib
import json
import math
from dataclasses import dataclass

from .errors import ExprSyntaxError, SceneError
from .expr import CurveDef, SurfaceDef
from .families import FamilyI1, FamilyI2, FamilyII

__all__ = ["Scene", "load_scene", "parse_scene"]

DEFAULT_TOL_RANK = 1e-9
DEFAULT_TOL_RESIDUAL = 1e-8
DEFAULT_JET_ORDER = 6


@dataclass
class Scene:
    kind: str                      # "family" or "general"
    family: object                 # FamilyI1 | FamilyI2 | FamilyII | None
    surface: SurfaceDef            # None for family scenes
    u_range: tuple
    v_range: tuple
    counts: tuple
    tol_rank: float
    tol_residual: float
    jet_order: int
    digest: str                    # sha256 of the scene file bytes


def _require(cond, msg):
    if not cond:
        raise SceneError(msg)


def _expr_list(obj, name, n=4):
    _require(isinstance(obj, list) and len(obj) == n
             and all(isinstance(s, str) for s in obj),
             f"'{name}' must be a list of {n} expression strings")
    return obj


def _curve(obj, name):
    try:
        return CurveDef.from_strings(_expr_list(obj, name))
    except (ExprSyntaxError, ValueError) as exc:
        raise SceneError(f"in '{name}': {exc}") from None


def _finite_number(x, name):
    _require(isinstance(x, (int, float)) and math.isfinite(x),
             f"'{name}' must be a finite number")
    return float(x)


def parse_scene(doc, digest=""):
    """Validate a parsed scene document and build the Scene object."""
    _require(isinstance(doc, dict), "scene must be a JSON object")
    kind = doc.get("kind")
    _require(kind in ("family", "general"), "'kind' must be 'family' or 'general'")

    family = None
    surface = None
    if kind == "family":
        fam = doc.get("family")
        _require(isinstance(fam, dict), "family scene needs a 'family' object")
        ftype = fam.get("type")
        if ftype == "I1":
            family = FamilyI1(_curve(fam.get("gamma"), "gamma"))
        elif ftype == "I2":
            eps = fam.get("epsilon")
            _require(eps in (1, -1), "'epsilon' must be 1 or -1")
            family = FamilyI2(_curve(fam.get("gamma"), "gamma"), eps)
        elif ftype == "II":
            family = FamilyII(_curve(fam.get("alpha"), "alpha"),
                              _curve(fam.get("beta"), "beta"))
        else:
            raise SceneError("'family.type' must be 'I1', 'I2' or 'II'")
    else:
        surf = doc.get("surface")
        _require(isinstance(surf, dict), "general scene needs a 'surface' object")
        x = _expr_list(surf.get("x"), "surface.x")
        xi1 = surf.get("xi1")
        xi2 = surf.get("xi2")
        _require((xi1 is None) == (xi2 is None),
                 "give both transversal fields 'xi1' and 'xi2' or neither")
        if xi1 is not None:
            xi1 = _expr_list(xi1, "surface.xi1")
            xi2 = _expr_list(xi2, "surface.xi2")
        try:
            surface = SurfaceDef.from_strings(x, xi1, xi2)
        except (ExprSyntaxError, ValueError) as exc:
            raise SceneError(f"in 'surface': {exc}") from None

    grid = doc.get("grid")
    _require(isinstance(grid, dict), "scene needs a 'grid' object")
    ranges = {}
    for axis in ("u", "v"):
        r = grid.get(axis)
        _require(isinstance(r, list) and len(r) == 2,
                 f"'grid.{axis}' must be [min, max]")
        lo = _finite_number(r[0], f"grid.{axis}[0]")
        hi = _finite_number(r[1], f"grid.{axis}[1]")
        _require(lo < hi, f"'grid.{axis}' range must be nonempty (min < max)")
        ranges[axis] = (lo, hi)
    counts = grid.get("counts")
    _require(isinstance(counts, list) and len(counts) == 2
             and all(isinstance(c, int) and c >= 2 for c in counts),
             "'grid.counts' must be two integers >= 2")

    tols = doc.get("tolerances", {})
    _require(isinstance(tols, dict), "'tolerances' must be an object")
    tol_rank = _finite_number(tols.get("rank", DEFAULT_TOL_RANK), "tolerances.rank")
    tol_residual = _finite_number(tols.get("residual", DEFAULT_TOL_RESIDUAL),
                                  "tolerances.residual")
    _require(tol_rank > 0 and tol_residual > 0, "tolerances must be positive")

    jet_order = doc.get("jet_order", DEFAULT_JET_ORDER)
    _require(isinstance(jet_order, int) and 3 <= jet_order <= 12,
             "'jet_order' must be an integer in [3, 12]")

    return Scene(kind, family, surface, ranges["u"], ranges["v"],
                 tuple(counts), tol_rank, tol_residual, jet_order, digest)


def load_scene(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise SceneError(f"cannot read scene file: {exc}") from None
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SceneError(f"scene file is not valid JSON: {exc}") from None
    return parse_scene(doc, hashlib.sha256(raw).hexdigest())
