"""Wavefront OBJ export of surface grids.

Vertices are emitted row-major in the u index; each grid quad is split into
two triangles, counter-clockwise with respect to the (u, v) parametrization.
"""

import numpy as np

from .errors import SceneError

__all__ = ["projection_from_spec", "write_obj"]


def projection_from_spec(drop=None, project=None):
    """Build the 3x4 projection matrix from CLI arguments.

    ``drop`` selects 3 of 4 coordinates by dropping the 1-based coordinate
    ``drop``; ``project`` is either three 1-based coordinate indices or a
    full row-major 3x4 matrix (12 numbers).
    """
    if (drop is None) == (project is None):
        raise SceneError("give exactly one of --drop and --project")
    if drop is not None:
        if drop not in (1, 2, 3, 4):
            raise SceneError("--drop must be one of 1, 2, 3, 4")
        keep = [k for k in range(4) if k != drop - 1]
        mat = np.zeros((3, 4))
        for row, col in enumerate(keep):
            mat[row, col] = 1.0
        return mat
    vals = project
    if len(vals) == 3:
        if any(v != int(v) or not 1 <= v <= 4 for v in vals):
            raise SceneError("--project with 3 entries must be coordinate indices in 1..4")
        mat = np.zeros((3, 4))
        for row, col in enumerate(vals):
            mat[row, int(col) - 1] = 1.0
    elif len(vals) == 12:
        mat = np.array(vals, dtype=float).reshape(3, 4)
    else:
        raise SceneError("--project needs 3 coordinate indices or 12 matrix entries")
    if np.linalg.matrix_rank(mat) < 3:
        raise SceneError("projection matrix is rank-deficient")
    return mat


def write_obj(fh, points):
    """Write an (nu, nv, 3) vertex grid as OBJ text."""
    nu, nv, _ = points.shape
    for i in range(nu):
        for j in range(nv):
            x, y, z = points[i, j]
            fh.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")

    def vid(i, j):
        return i * nv + j + 1

    for i in range(nu - 1):
        for j in range(nv - 1):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            fh.write(f"f {a} {b} {c}\n")
            fh.write(f"f {a} {c} {d}\n")
