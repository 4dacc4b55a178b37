"""Command-line interface.

Subcommands:

    classify          per-point surface types over a grid
    verify-family     structure-equation / parallelism verification
    normalize-pencil  normal form of a symmetric-form pair
    export-mesh       OBJ export of the surface grid

Exit codes: 0 success, 1 verification failure, 2 input error, 3 numerical
degeneracy on more than 10% of the grid.  Reports go to stdout (or --out);
diagnostics go to stderr.
"""

import argparse
import sys

import numpy as np

from . import families, report
from .errors import (AffSurf4Error, DegenerateCoefficient, DegenerateCurve,
                     InsufficientOrder, SceneError, SingularFrame)
from .immersion import cubic_form, decompose_frame, frame_from_surface, surface_type_at
from .mesh import projection_from_spec, write_obj
from .pencil import (classify_pencil, normalize_pencil, rho1_apply,
                     rho2_apply, semiconformal_matrix)
from .scene import load_scene

DEGENERACY_LIMIT = 0.1

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_DEGENERATE = 3


def _grid_type(text):
    try:
        nu, nv = text.lower().split("x")
        nu, nv = int(nu), int(nv)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--grid expects NxM, got {text!r}")
    if nu < 2 or nv < 2:
        raise argparse.ArgumentTypeError("--grid counts must be >= 2")
    return nu, nv


def _floats_type(text):
    try:
        return [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _sym2_type(text):
    vals = _floats_type(text)
    if len(vals) != 3 or not all(np.isfinite(vals)):
        raise argparse.ArgumentTypeError("expected three finite numbers s11,s12,s22")
    from .linalg import Sym2
    return Sym2(*vals)


def _emit(text, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args):
    scene = load_scene(args.scene)
    if args.grid:
        scene.counts = args.grid
    if args.tol_rank is not None:
        scene.tol_rank = args.tol_rank
    if args.tol_residual is not None:
        scene.tol_residual = args.tol_residual
    if args.jet_order is not None:
        scene.jet_order = args.jet_order
    return scene


def _grid_axes(scene):
    return (np.linspace(scene.u_range[0], scene.u_range[1], scene.counts[0]),
            np.linspace(scene.v_range[0], scene.v_range[1], scene.counts[1]))


def _iter_family_frames(scene, us, vs):
    """Yield (u, v, frame-or-None, reason) over the grid for a family scene."""
    for u in us:
        try:
            co = families.curve_coefficients(scene.family, float(u),
                                             scene.jet_order, scene.tol_rank)
        except (DegenerateCurve, DegenerateCoefficient) as exc:
            for v in vs:
                yield float(u), float(v), None, str(exc)
            continue
        for v in vs:
            try:
                fp = families.frame_from_coefficients(scene.family, co, float(v),
                                                      scene.tol_rank)
            except SingularFrame as exc:
                yield float(u), float(v), None, str(exc)
                continue
            yield float(u), float(v), fp, None


def _iter_general_frames(scene, us, vs):
    for u in us:
        for v in vs:
            try:
                fp = frame_from_surface(scene.surface, float(u), float(v),
                                        scene.jet_order, scene.tol_rank)
            except (SingularFrame, AffSurf4Error) as exc:
                yield float(u), float(v), None, str(exc)
                continue
            yield float(u), float(v), fp, None


def cmd_classify(args):
    scene = _load(args)
    us, vs = _grid_axes(scene)
    if scene.kind == "family" and isinstance(scene.family, families.FamilyII):
        try:
            families.check_beta(scene.family, us)
        except ValueError as exc:
            raise SceneError(str(exc))
    frames = (_iter_family_frames(scene, us, vs) if scene.kind == "family"
              else _iter_general_frames(scene, us, vs))
    points, exceptional = [], []
    for u, v, fp, reason in frames:
        if fp is None:
            exceptional.append({"u": u, "v": v, "reason": reason})
            continue
        try:
            ptype, phi = surface_type_at(fp, scene.tol_rank, scene.tol_rank)
        except (SingularFrame, InsufficientOrder) as exc:
            exceptional.append({"u": u, "v": v, "reason": str(exc)})
            continue
        points.append({"u": u, "v": v, "type": ptype.value,
                       "phi": [phi.s11, phi.s12, phi.s22]})
    doc = report.classify_report(scene, args.scene, points, exceptional)
    _emit(report.dumps(doc), args.out)
    if doc["summary"]["degenerate_fraction"] > DEGENERACY_LIMIT:
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_verify_family(args):
    scene = _load(args)
    if scene.kind == "family":
        try:
            rep = families.verify_family(
                scene.family, scene.u_range, scene.v_range, scene.counts,
                scene.jet_order, scene.tol_rank)
        except ValueError as exc:
            raise SceneError(str(exc))
        checks = rep.checks
        type_counts = rep.type_counts
        points = [{"u": p.u, "v": p.v, "type": p.ptype,
                   "phi": list(p.phi), "residuals": p.residuals}
                  for p in rep.points]
        exceptional = rep.clipped
        passed = bool(rep.points) and rep.all_type_ii() \
            and rep.max_residual() < scene.tol_residual
    else:
        if not scene.surface.has_transversal:
            raise SceneError("verify-family on a general scene needs the "
                             "transversal fields xi1, xi2 (no canonical "
                             "bundle exists for a degenerate surface)")
        us, vs = _grid_axes(scene)
        points, exceptional = [], []
        type_counts = {}
        cubic_max = 0.0
        for u, v, fp, reason in _iter_general_frames(scene, us, vs):
            if fp is None:
                exceptional.append({"u": u, "v": v, "reason": reason})
                continue
            try:
                fd = decompose_frame(fp, scene.tol_rank)
                c = cubic_form(fp, fd).max_abs()
                h3v, h4v = fd.h_values()
                ptype = classify_pencil(h3v, h4v, scene.tol_rank)
                phi = semiconformal_matrix(h3v, h4v)
            except (SingularFrame, InsufficientOrder) as exc:
                exceptional.append({"u": u, "v": v, "reason": str(exc)})
                continue
            cubic_max = max(cubic_max, float(c))
            type_counts[ptype.value] = type_counts.get(ptype.value, 0) + 1
            points.append({"u": u, "v": v, "type": ptype.value,
                           "phi": [phi.s11, phi.s12, phi.s22],
                           "residuals": {"cubic_form": float(c)}})
        checks = {"cubic_form": cubic_max}
        passed = bool(points) and cubic_max < scene.tol_residual
    doc = report.verify_report(scene, args.scene, checks, points,
                               exceptional, type_counts, passed)
    _emit(report.dumps(doc), args.out)
    if doc["summary"]["degenerate_fraction"] > DEGENERACY_LIMIT:
        return EXIT_DEGENERATE
    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def cmd_normalize_pencil(args):
    res = normalize_pencil(args.h3, args.h4, args.tol)
    pair = rho2_apply(res.Qinv, (args.h3, args.h4))
    pair = (rho1_apply(res.P, pair[0]), rho1_apply(res.P, pair[1]))
    residual = max((pair[0] - res.normal_pair[0]).max_abs(),
                   (pair[1] - res.normal_pair[1]).max_abs())
    doc = {
        "type": res.ptype.value,
        "P": [list(map(float, row)) for row in res.P],
        "Qinv": [list(map(float, row)) for row in res.Qinv],
        "normal_pair": {
            "h3": [res.normal_pair[0].s11, res.normal_pair[0].s12, res.normal_pair[0].s22],
            "h4": [res.normal_pair[1].s11, res.normal_pair[1].s12, res.normal_pair[1].s22],
        },
        "residual": residual,
    }
    _emit(report.dumps(doc), args.out)
    return EXIT_OK


def cmd_export_mesh(args):
    scene = _load(args)
    mat = projection_from_spec(args.drop, args.project)
    us, vs = _grid_axes(scene)
    pts = np.zeros((len(us), len(vs), 4))
    if scene.kind == "family":
        for i, u in enumerate(us):
            for j, v in enumerate(vs):
                pts[i, j] = families.surface_point(scene.family, float(u), float(v))
    else:
        for i, u in enumerate(us):
            for j, v in enumerate(vs):
                pts[i, j] = [float(c) for c in scene.surface.at(float(u), float(v))]
    projected = pts @ mat.T
    try:
        with open(args.out, "w") as fh:
            write_obj(fh, projected)
    except OSError as exc:
        raise SceneError(f"cannot write mesh: {exc}")
    return EXIT_OK


def _add_scene_flags(sub, out_required=False):
    sub.add_argument("scene", help="scene JSON file")
    sub.add_argument("--grid", type=_grid_type, default=None,
                     help="override grid counts, e.g. 21x21")
    sub.add_argument("--tol-rank", type=float, default=None,
                     help="rank floor for frame/curve determinants")
    sub.add_argument("--tol-residual", type=float, default=None,
                     help="pass/fail threshold for verification residuals")
    sub.add_argument("--jet-order", type=int, default=None,
                     help="jet truncation order (default 6)")
    sub.add_argument("--out", default=None, required=out_required,
                     help="output path" + ("" if out_required else " (default stdout)"))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="affsurf4",
        description="Affine invariants and parallel-surface verification in R^4")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("classify", help="surface type at every grid point")
    _add_scene_flags(p)
    p.set_defaults(func=cmd_classify)

    p = subs.add_parser("verify-family",
                        help="verify structure equations and parallelism")
    _add_scene_flags(p)
    p.set_defaults(func=cmd_verify_family)

    p = subs.add_parser("normalize-pencil",
                        help="normal form of a pair of symmetric 2x2 forms")
    p.add_argument("--h3", type=_sym2_type, required=True,
                   help="entries s11,s12,s22 of h3")
    p.add_argument("--h4", type=_sym2_type, required=True,
                   help="entries s11,s12,s22 of h4")
    p.add_argument("--tol", type=float, default=1e-9,
                   help="rank/signature threshold")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_normalize_pencil)

    p = subs.add_parser("export-mesh", help="write the surface grid as OBJ")
    _add_scene_flags(p, out_required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--drop", type=int, default=None,
                       help="drop this 1-based coordinate, keep the other three")
    group.add_argument("--project", type=_floats_type, default=None,
                       help="3 coordinate indices or 12 entries of a 3x4 matrix")
    p.set_defaults(func=cmd_export_mesh)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SceneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AffSurf4Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
