"""Moving-frame decomposition of an immersion at a point.

Everything is computed on jet-valued scalars: the fundamental quantities
come out of 4x4 solves over the jet ring, so derivatives of the second
fundamental form (needed by the cubic form) are read off jets instead of
being estimated by differencing.  Finite differences stay available as an
independent test oracle only.

Frames are coordinate frames (v1 = x_u, v2 = x_v); general frame changes
are exercised through ``transform_frame``, which reparametrizes by a linear
change of coordinates and recombines the transversal fields.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (InsufficientOrder, NotNormalized, SingularFrame,
                     SingularTransform)
from .expr import SurfaceDef
from .jets import Jet2, compose2
from .linalg import DEFAULT_TOL_RANK, Sym2, solve4, value, vec_value
from .pencil import classify_pencil, semiconformal_matrix

__all__ = [
    "FramePoint", "FundamentalData", "CubicForm",
    "frame_from_surface", "frame_from_jets", "decompose_frame",
    "surface_type_at", "cubic_form", "parallel_check_relations",
    "transform_frame", "NORMAL_H3", "NORMAL_H4",
]

NORMAL_H3 = Sym2(0.0, 1.0, 0.0)   # E2
NORMAL_H4 = Sym2(1.0, 0.0, 0.0)   # (E0 + E1)/2


@dataclass
class FramePoint:
    """First-order frame {v1, v2, xi1, xi2, x} at (u, v), jet-valued."""

    v1: list
    v2: list
    xi1: list
    xi2: list
    x: list
    u: float
    v: float

    def basis(self):
        return [self.v1, self.v2, self.xi1, self.xi2]


@dataclass
class FundamentalData:
    """All first-order invariants of the immersion at a point.

    h3, h4 carry jet entries; gamma[k][i][j] is the coefficient of X_k in
    nabla_{X_i} X_j; weingarten[beta][k][i] is A_{xi_beta} acting on X_i,
    component along X_k; tau[alpha][beta][i] is the coefficient of
    xi_{alpha} in the normal derivative of xi_{beta} along X_i.
    """

    h3: Sym2
    h4: Sym2
    gamma: list
    weingarten: list
    tau: list
    order_h: int
    order_w: int

    def h_values(self):
        return self.h3.value_part(), self.h4.value_part()

    def gamma_values(self):
        return np.array([[[value(self.gamma[k][i][j]) for j in range(2)]
                          for i in range(2)] for k in range(2)])

    def tau_values(self):
        return np.array([[[value(self.tau[a][b][i]) for i in range(2)]
                          for b in range(2)] for a in range(2)])

    def weingarten_values(self):
        return np.array([[[value(self.weingarten[b][k][i]) for i in range(2)]
                          for k in range(2)] for b in range(2)])


@dataclass
class CubicForm:
    """Components of the covariant derivative of h: c3[i, j, k], c4[i, j, k],
    symmetric in (j, k)."""

    c3: np.ndarray
    c4: np.ndarray

    def max_abs(self):
        return max(np.max(np.abs(self.c3)), np.max(np.abs(self.c4)))


def _as_jet2(val, order):
    if isinstance(val, Jet2):
        return val
    return Jet2.constant(float(val), order)


def _vec_order(vec):
    return min(j.order for j in vec)


def frame_from_jets(x, u, v, xi1=None, xi2=None, tol_rank=DEFAULT_TOL_RANK):
    """Coordinate FramePoint from the jets of the immersion components.

    Without transversal fields, the tangent plane is completed to a frame
    by two constant vectors orthogonal to it (the semiconformal type does
    not depend on this choice; parallelism questions do, and are refused
    upstream for such surfaces).
    """
    order = _vec_order(x)
    v1 = [c.d_u() for c in x]
    v2 = [c.d_v() for c in x]
    if xi1 is None:
        tangent = np.column_stack([vec_value(v1), vec_value(v2)])
        uu, ss, _ = np.linalg.svd(tangent, full_matrices=True)
        if ss[1] <= tol_rank * max(ss[0], 1e-30):
            raise SingularFrame(f"tangent plane degenerate at ({u}, {v})")
        xi1 = [Jet2.constant(c, order) for c in uu[:, 2]]
        xi2 = [Jet2.constant(c, order) for c in uu[:, 3]]
    return FramePoint(v1, v2, xi1, xi2, x, float(u), float(v))


def frame_from_surface(surface: SurfaceDef, u, v, order=6,
                       tol_rank=DEFAULT_TOL_RANK):
    """Coordinate FramePoint of a SurfaceDef at (u, v)."""
    us = Jet2.seed("u", u, order)
    vs = Jet2.seed("v", v, order)
    x = [_as_jet2(c, order) for c in surface.at(us, vs)]
    xi1 = xi2 = None
    if surface.has_transversal:
        xi1_raw, xi2_raw = surface.transversal_at(us, vs)
        xi1 = [_as_jet2(c, order) for c in xi1_raw]
        xi2 = [_as_jet2(c, order) for c in xi2_raw]
    return frame_from_jets(x, u, v, xi1, xi2, tol_rank)


def _solve_values(fp, rhs_cols, tol_rank):
    """Float solve of the frame system for value-level right-hand sides."""
    vmat = np.column_stack([vec_value(c) for c in fp.basis()])
    scale = max(np.max(np.abs(vmat)), 1e-30)
    if abs(np.linalg.det(vmat)) <= tol_rank * scale ** 4:
        raise SingularFrame("frame determinant below rank floor")
    sol = np.linalg.solve(vmat, np.column_stack(rhs_cols))
    return [[Jet2.constant(sol[i, c], 0) for i in range(4)]
            for c in range(sol.shape[1])]


def decompose_frame(fp: FramePoint, tol_rank=DEFAULT_TOL_RANK, max_orders=None):
    """Solve the frame equations for h, Gamma, the Weingarten operators
    and the normal connection, all jet-valued.

    ``max_orders`` optionally caps (order_h, order_w) below what the frame
    jets would support; the cubic form needs no more than (1, 0).
    """
    n_x = _vec_order(fp.x)
    n_xi = min(_vec_order(fp.xi1), _vec_order(fp.xi2))
    n_b = min(_vec_order(fp.v1), _vec_order(fp.v2), n_xi)
    order_h = min(n_x - 2, n_b)
    order_w = min(n_xi - 1, n_b)
    if max_orders is not None:
        order_h = min(order_h, max_orders[0])
        order_w = min(order_w, max_orders[1])
    if order_h < 0 or order_w < 0:
        raise InsufficientOrder(
            f"frame jets too short: x order {n_x}, transversal order {n_xi}")

    if order_h == 0:
        sol_h = _solve_values(fp, [[c.deriv(2, 0) for c in fp.x],
                                   [c.deriv(1, 1) for c in fp.x],
                                   [c.deriv(0, 2) for c in fp.x]], tol_rank)
    else:
        basis_h = [[c.truncate(order_h) for c in col] for col in fp.basis()]
        x_uu = [c.d_u().d_u().truncate(order_h) for c in fp.x]
        x_uv = [c.d_u().d_v().truncate(order_h) for c in fp.x]
        x_vv = [c.d_v().d_v().truncate(order_h) for c in fp.x]
        sol_h = solve4(basis_h, [x_uu, x_uv, x_vv], tol_rank)

    if order_w == 0:
        sol_w = _solve_values(fp, [[c.deriv(1, 0) for c in fp.xi1],
                                   [c.deriv(0, 1) for c in fp.xi1],
                                   [c.deriv(1, 0) for c in fp.xi2],
                                   [c.deriv(0, 1) for c in fp.xi2]], tol_rank)
    else:
        basis_w = [[c.truncate(order_w) for c in col] for col in fp.basis()]
        rhs_w = [[c.d_u().truncate(order_w) for c in fp.xi1],
                 [c.d_v().truncate(order_w) for c in fp.xi1],
                 [c.d_u().truncate(order_w) for c in fp.xi2],
                 [c.d_v().truncate(order_w) for c in fp.xi2]]
        sol_w = solve4(basis_w, rhs_w, tol_rank)

    # sol_h rows: coefficients of x_uu, x_uv, x_vv in (v1, v2, xi1, xi2)
    h3 = Sym2(sol_h[0][2], sol_h[1][2], sol_h[2][2])
    h4 = Sym2(sol_h[0][3], sol_h[1][3], sol_h[2][3])
    by_ij = {(0, 0): sol_h[0], (0, 1): sol_h[1], (1, 0): sol_h[1], (1, 1): sol_h[2]}
    gamma = [[[by_ij[(i, j)][k] for j in range(2)] for i in range(2)]
             for k in range(2)]
    # sol_w rows: (beta, i) = (1,u), (1,v), (2,u), (2,v)
    weingarten = [[[-sol_w[2 * b + i][k] for i in range(2)] for k in range(2)]
                  for b in range(2)]
    tau = [[[sol_w[2 * b + i][2 + a] for i in range(2)] for b in range(2)]
           for a in range(2)]
    return FundamentalData(h3, h4, gamma, weingarten, tau, order_h, order_w)


def surface_type_at(fp: FramePoint, tol=1e-9, tol_rank=DEFAULT_TOL_RANK):
    """Semiconformal form (value part) and pencil type at the point."""
    fd = decompose_frame(fp, tol_rank)
    h3v, h4v = fd.h_values()
    phi = semiconformal_matrix(h3v, h4v)
    return classify_pencil(h3v, h4v, tol), phi


def cubic_form(fp: FramePoint, fd: FundamentalData = None,
               tol_rank=DEFAULT_TOL_RANK):
    """Covariant derivative of h; all components vanish iff the immersion
    is parallel for the given transversal bundle."""
    if fd is None:
        fd = decompose_frame(fp, tol_rank)
    if fd.order_h < 1:
        raise InsufficientOrder(
            f"cubic form needs h at jet order >= 1, have {fd.order_h}")
    hj = (fd.h3, fd.h4)
    hv = [fd.h3.value_part(), fd.h4.value_part()]
    gv = fd.gamma_values()
    tv = fd.tau_values()

    def dh(alpha, i, j, k):
        entry = hj[alpha].entry(j, k)
        return entry.d_u().value if i == 0 else entry.d_v().value

    out = []
    for alpha in range(2):
        c = np.zeros((2, 2, 2))
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    acc = dh(alpha, i, j, k)
                    acc += hv[0].entry(j, k) * tv[alpha][0][i]
                    acc += hv[1].entry(j, k) * tv[alpha][1][i]
                    for l in range(2):
                        acc -= gv[l, i, j] * hv[alpha].entry(l, k)
                        acc -= gv[l, i, k] * hv[alpha].entry(j, l)
                    c[i, j, k] = acc
        out.append(c)
    return CubicForm(out[0], out[1])


def parallel_check_relations(fd: FundamentalData, tol=1e-6):
    """Residuals of the parallel-surface frame relations at a point whose
    (h3, h4) is in type-II normal form.

    Raises NotNormalized when the value parts of (h3, h4) deviate from
    (E2, (E0+E1)/2) by more than ``tol``.
    """
    h3v, h4v = fd.h_values()
    dev = max((h3v - NORMAL_H3).max_abs(), (h4v - NORMAL_H4).max_abs())
    if dev > tol:
        raise NotNormalized(
            f"(h3, h4) deviate from the type-II normal form by {dev:.3e}")
    g = fd.gamma_values()
    t = fd.tau_values()
    return {
        "gamma_1_12": abs(g[0, 0, 1]),
        "gamma_1_22": abs(g[0, 1, 1]),
        "nc_xi1_u": max(abs(t[0, 0, 0] - (g[0, 0, 0] + g[1, 0, 1])),
                        abs(t[1, 0, 0])),
        "nc_xi1_v": max(abs(t[0, 0, 1] - (g[0, 0, 1] + g[1, 1, 1])),
                        abs(t[1, 0, 1])),
        "nc_xi2_u": max(abs(t[0, 1, 0] - 2.0 * g[1, 0, 0]),
                        abs(t[1, 1, 0] - 2.0 * g[0, 0, 0])),
        "nc_xi2_v": max(abs(t[0, 1, 1] - 2.0 * g[1, 0, 1]),
                        abs(t[1, 1, 1] - 2.0 * g[0, 0, 1])),
    }


def transform_frame(fp: FramePoint, P, Q):
    """Frame change by a constant group element (P on the tangent block,
    Q on the transversal block).

    The tangent part is realized as the linear reparametrization with
    Jacobian P^T, so the result is again a coordinate frame; the
    transversal fields are recombined by Q.
    """
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if np.linalg.det(P) == 0.0 or np.linalg.det(Q) == 0.0:
        raise SingularTransform("frame change needs invertible P and Q")
    m = P.T
    order = _vec_order(fp.x)
    base_new = np.linalg.solve(m, np.array([fp.u, fp.v]))
    us = Jet2.seed("u", base_new[0], order)
    vs = Jet2.seed("v", base_new[1], order)
    a = m[0, 0] * us + m[0, 1] * vs
    b = m[1, 0] * us + m[1, 1] * vs
    x_new = [compose2(c, a, b) for c in fp.x]
    xi1_c = [compose2(c, a, b) for c in fp.xi1]
    xi2_c = [compose2(c, a, b) for c in fp.xi2]
    xi1_new = [Q[0, 0] * c1 + Q[0, 1] * c2 for c1, c2 in zip(xi1_c, xi2_c)]
    xi2_new = [Q[1, 0] * c1 + Q[1, 1] * c2 for c1, c2 in zip(xi1_c, xi2_c)]
    return FramePoint([c.d_u() for c in x_new], [c.d_v() for c in x_new],
                      xi1_new, xi2_new, x_new,
                      float(base_new[0]), float(base_new[1]))
