"""The three families of 1-degenerate parallel ruled surfaces.

Family I.1:  x(u,v) = gamma'(u) + v gamma(u)
Family I.2:  x(u,v) = (eps gamma(u) + gamma''(u)) + v gamma'(u), eps = +-1
Family II:   x(u,v) = alpha(u) + v beta(u) with beta'' = -beta

Each family comes with an explicit transversal bundle span(xi1, xi2) and
closed-form connection coefficients; ``verify_family`` evaluates all seven
structure equations, the normal form of (h3, h4), the cubic form and the
parallel-frame relations on a grid and reports per-check maxima.

The curve data enters through G = det(gamma, gamma', gamma'', gamma''')
(resp. D = det(alpha'', alpha', beta', beta)) and the decomposition of the
fourth derivative, gamma'''' = L' gamma''' + a gamma'' + b gamma' + c gamma
(resp. alpha''' = L' alpha'' + a alpha' + b beta' + c beta).  Logarithmic
derivatives are computed as quotients G'/G, c'/c, so negative G or c are
fine; only c = 0 is fatal (and only for family I.2).
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (DegenerateCoefficient, DegenerateCurve, SingularFrame)
from .expr import CurveDef
from .immersion import (FramePoint, NORMAL_H3, NORMAL_H4, cubic_form,
                        decompose_frame, parallel_check_relations)
from .jets import Jet1, Jet2, lift
from .linalg import DEFAULT_TOL_RANK, det4, solve4, value, vec_value
from .pencil import PencilType, classify_pencil, semiconformal_matrix

__all__ = [
    "FamilyI1", "FamilyI2", "FamilyII", "CurveCoefficients",
    "Christoffels", "PointRecord", "VerificationReport",
    "curve_coefficients", "family_frame", "frame_from_coefficients",
    "family_christoffels", "verify_family", "check_beta", "surface_point",
]

DEFAULT_ORDER = 6


@dataclass(frozen=True)
class FamilyI1:
    gamma: CurveDef

    label = "I.1"


@dataclass(frozen=True)
class FamilyI2:
    gamma: CurveDef
    epsilon: int

    label = "I.2"

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise ValueError(f"epsilon must be +1 or -1, got {self.epsilon}")


@dataclass(frozen=True)
class FamilyII:
    alpha: CurveDef
    beta: CurveDef

    label = "II"


def _as_jet1(val, order):
    if isinstance(val, Jet1):
        return val
    return Jet1.constant(float(val), order)


def _curve_jets(curve, u, order):
    uj = Jet1.seed(u, order)
    return [_as_jet1(c, order) for c in curve.at(uj)]


def check_beta(family: FamilyII, u_values, tol=1e-8):
    """beta'' = -beta must hold on the sampled domain."""
    worst = 0.0
    for u in u_values:
        beta = _curve_jets(family.beta, float(u), 2)
        scale = max(1.0, max(abs(c.value) for c in beta))
        worst = max(worst, max(abs(c.derivs[2] + c.value) for c in beta) / scale)
    if worst > tol:
        raise ValueError(
            f"family II needs beta'' = -beta; max residual {worst:.3e} on the sampled domain")
    return worst


@dataclass
class CurveCoefficients:
    """Jet-backed curve data of a family at a sample u.

    ``g`` is G (family I) or D (family II); ``lp`` is the logarithmic
    derivative g'/g; (a, b, c) complete the fourth- (resp. third-)
    derivative decomposition; ``lnc_p`` = c'/c is only set for family I.2.
    ``residual`` is the value-level norm of the decomposition residual,
    relative to the derivative scale.
    """

    u: float
    g: Jet1
    lp: Jet1
    a: Jet1
    b: Jet1
    c: Jet1
    residual: float
    lnc_p: Jet1 = None
    _derivs: list = field(default_factory=list, repr=False)

    @property
    def lpp(self):
        return float(self.lp.derivs[1])

    @property
    def ap(self):
        return float(self.a.derivs[1])


def curve_coefficients(kind, u, order=DEFAULT_ORDER, tol_rank=DEFAULT_TOL_RANK):
    """Evaluate the curve determinant and decomposition coefficients at u."""
    if isinstance(kind, FamilyII):
        alpha = _curve_jets(kind.alpha, u, order)
        beta = _curve_jets(kind.beta, u, order)
        a1 = [c.d() for c in alpha]
        a2 = [c.d() for c in a1]
        a3 = [c.d() for c in a2]
        b1 = [c.d() for c in beta]
        cols = [a2, a1, b1, beta]
        rhs = a3
        derivs = [alpha, a1, a2, a3, beta, b1]
    else:
        gamma = _curve_jets(kind.gamma, u, order)
        d1 = [c.d() for c in gamma]
        d2 = [c.d() for c in d1]
        d3 = [c.d() for c in d2]
        d4 = [c.d() for c in d3]
        cols = [d3, d2, d1, gamma]
        rhs = d4
        derivs = [gamma, d1, d2, d3, d4]

    g = det4(*cols)
    scale = max(max(abs(value(e)) for e in col) for col in cols)
    if abs(g.value) <= tol_rank * max(scale, 1e-30) ** 4:
        name = "D" if isinstance(kind, FamilyII) else "G"
        raise DegenerateCurve(f"{name} = {g.value:.3e} below rank floor at u = {u}")
    lp = g.d() / g
    try:
        sol = solve4(cols, [rhs], tol_rank)[0]
    except SingularFrame as exc:
        raise DegenerateCurve(str(exc)) from None
    lchk, a, b, c = sol

    recon = [lp * cols[0][k] + a * cols[1][k] + b * cols[2][k] + c * cols[3][k]
             for k in range(4)]
    resid = max(abs(value(rhs[k]) - value(recon[k])) for k in range(4))
    resid /= max(scale, max(abs(value(e)) for e in rhs), 1.0)

    lnc_p = None
    if isinstance(kind, FamilyI2):
        if abs(c.value) <= tol_rank * max(scale, 1e-30):
            raise DegenerateCoefficient(
                f"family I.2 needs c != 0; c = {c.value:.3e} at u = {u}")
        lnc_p = c.d() / c
    return CurveCoefficients(float(u), g, lp, a, b, c, resid, lnc_p, derivs)


@dataclass(frozen=True)
class Christoffels:
    """The three nonzero connection coefficients of the adapted frame."""

    g111: float   # coefficient of x_u in D_u x_u
    g211: float   # coefficient of x_v in D_u x_u
    g212: float   # coefficient of x_v in D_v x_u

    def as_tensor(self):
        """Full Gamma[k, i, j] with the adapted-frame zeros filled in."""
        g = np.zeros((2, 2, 2))
        g[0, 0, 0] = self.g111
        g[1, 0, 0] = self.g211
        g[1, 0, 1] = g[1, 1, 0] = self.g212
        return g


def family_christoffels(kind, coeffs: CurveCoefficients, v):
    """Closed-form connection coefficients at (coeffs.u, v)."""
    lp = coeffs.lp.value
    a = coeffs.a.value
    b = coeffs.b.value
    if isinstance(kind, FamilyI1):
        return Christoffels((lp + v) / 3.0,
                            (b - v * a + v * v * (lp + v)) / 3.0,
                            -(lp + 4.0 * v) / 6.0)
    if isinstance(kind, FamilyI2):
        if coeffs.lnc_p is None:
            raise DegenerateCoefficient("family I.2 coefficients lack c'/c")
        eps = float(kind.epsilon)
        lc = coeffs.lnc_p.value
        g111 = (lc + lp + v) / 3.0
        g211 = (b + coeffs.ap - eps * lp - (a + eps) * lc
                + v * (-coeffs.lpp + lp * lc - a - 2.0 * eps)
                + v * v * (lc + lp) + v ** 3) / 3.0
        g212 = -(lc + lp + 4.0 * v) / 6.0
        return Christoffels(g111, g211, g212)
    if isinstance(kind, FamilyII):
        return Christoffels(lp / 3.0, (b - v * a - v) / 3.0, -lp / 6.0)
    raise TypeError(f"unknown family kind {kind!r}")


def _vadd(*vecs):
    out = vecs[0]
    for v in vecs[1:]:
        out = [a + b for a, b in zip(out, v)]
    return out


def _vscale(coef, vec):
    return [coef * c for c in vec]


def frame_from_coefficients(kind, co: CurveCoefficients, v,
                            tol_rank=DEFAULT_TOL_RANK):
    """Adapted FramePoint of the family at (co.u, v), jet-valued."""
    vv = float(v)
    if isinstance(kind, FamilyII):
        alpha, a1, a2, _, beta, b1 = [list(map(lift, vec)) for vec in co._derivs]
        order = min(j.order for j in a2 + b1)
        vj = Jet2.seed("v", vv, max(order, 1))
        lp = lift(co.lp)
        p = lp / 3.0
        s = (lift(co.b) - vj * lift(co.a) - vj) / 3.0
        qq = -lp / 6.0
        x = _vadd(alpha, _vscale(vj, beta))
        xu = _vadd(a1, _vscale(vj, b1))
        xv = beta
        xi1 = _vadd(b1, _vscale(-qq, beta))
        xi2 = _vadd(a2, _vscale(-p, a1), _vscale(-(vj * p), b1),
                    _vscale(-(vj + s), beta))
    else:
        if isinstance(kind, FamilyI1):
            g0, g1, g2, g3, _ = [list(map(lift, vec)) for vec in co._derivs]
            order = min(j.order for j in g3)
            vj = Jet2.seed("v", vv, max(order, 1))
            lp = lift(co.lp)
            p = (lp + vj) / 3.0
            s = (lift(co.b) - vj * lift(co.a) + vj * vj * (lp + vj)) / 3.0
            qq = -(lp + 4.0 * vj) / 6.0
            x = _vadd(g1, _vscale(vj, g0))
            xu = _vadd(g2, _vscale(vj, g1))
            xv = g0
            xi1 = _vadd(g1, _vscale(-qq, g0))
            xi2 = _vadd(g3, _vscale(vj - p, g2), _vscale(-(vj * p), g1),
                        _vscale(-s, g0))
        else:
            g0, g1, g2, g3, _ = [list(map(lift, vec)) for vec in co._derivs]
            order = min(j.order for j in g3)
            vj = Jet2.seed("v", vv, max(order, 1))
            eps = float(kind.epsilon)
            lp = lift(co.lp)
            lc = lift(co.lnc_p)
            aj = lift(co.a)
            bj = lift(co.b)
            p = (lc + lp + vj) / 3.0
            s = (bj + lift(co.a.d()) - eps * lp - (aj + eps) * lc
                 + vj * (-lift(co.lp.d()) + lp * lc - aj - 2.0 * eps)
                 + vj * vj * (lc + lp) + vj * vj * vj) / 3.0
            qq = -(lc + lp + 4.0 * vj) / 6.0
            x = _vadd(_vscale(eps, g0), g2, _vscale(vj, g1))
            xu = _vadd(_vscale(eps, g1), g3, _vscale(vj, g2))
            xv = g1
            xi1 = _vadd(g2, _vscale(-qq, g1))
            xi2 = _vadd(_vscale(lp + vj - p, g3), _vscale(aj + eps - vj * p, g2),
                        _vscale(bj - eps * p - s, g1), _vscale(lift(co.c), g0))

    fp = FramePoint(xu, xv, xi1, xi2, x, co.u, vv)
    vmat = np.column_stack([vec_value(c) for c in fp.basis()])
    scale = max(np.max(np.abs(vmat)), 1e-30)
    if abs(np.linalg.det(vmat)) <= tol_rank * scale ** 4:
        raise SingularFrame(f"family frame degenerate at ({co.u}, {vv})")
    return fp


def family_frame(kind, u, v, order=DEFAULT_ORDER, tol_rank=DEFAULT_TOL_RANK):
    """Adapted frame {x_u, x_v, xi1, xi2, x} of the family at (u, v)."""
    co = curve_coefficients(kind, u, order, tol_rank)
    return frame_from_coefficients(kind, co, v, tol_rank)


def surface_point(kind, u, v):
    """Plain value of the family immersion x(u, v) (for mesh export)."""
    if isinstance(kind, FamilyII):
        a = _curve_jets(kind.alpha, u, 1)
        b = _curve_jets(kind.beta, u, 1)
        return np.array([a[k].value + v * b[k].value for k in range(4)])
    g = _curve_jets(kind.gamma, u, 2)
    if isinstance(kind, FamilyI1):
        return np.array([g[k].derivs[1] + v * g[k].value for k in range(4)])
    eps = float(kind.epsilon)
    return np.array([eps * g[k].value + g[k].derivs[2] + v * g[k].derivs[1]
                     for k in range(4)])


@dataclass
class PointRecord:
    u: float
    v: float
    ptype: str
    phi: tuple
    residuals: dict


@dataclass
class VerificationReport:
    label: str
    grid: dict
    checks: dict
    type_counts: dict
    points: list
    clipped: list

    def max_residual(self):
        return max(self.checks.values()) if self.checks else float("inf")

    def all_type_ii(self):
        return set(self.type_counts) <= {PencilType.II.value}

    def passes(self, tol):
        return (bool(self.points) and not self.clipped
                and self.all_type_ii() and self.max_residual() < tol)


_CHECK_KEYS = ("guu", "guv", "gvv", "wu1", "wv1", "wu2", "wv2",
               "h_normal_form", "christoffels", "cubic_form",
               "parallel_relations", "coefficient_residual")


def _point_checks(kind, co, ct, fp, tol_type, tol_rank):
    res = {}
    xuu = np.array([c.deriv(2, 0) for c in fp.x])
    xuv = np.array([c.deriv(1, 1) for c in fp.x])
    xvv = np.array([c.deriv(0, 2) for c in fp.x])
    v1 = vec_value(fp.v1)
    v2 = vec_value(fp.v2)
    xi1 = vec_value(fp.xi1)
    xi2 = vec_value(fp.xi2)
    res["guu"] = np.max(np.abs(xuu - (ct.g111 * v1 + ct.g211 * v2 + xi2)))
    res["guv"] = np.max(np.abs(xuv - (ct.g212 * v2 + xi1)))
    res["gvv"] = np.max(np.abs(xvv))

    basis = np.column_stack([v1, v2, xi1, xi2])
    dxi = np.column_stack([
        [c.deriv(1, 0) for c in fp.xi1], [c.deriv(0, 1) for c in fp.xi1],
        [c.deriv(1, 0) for c in fp.xi2], [c.deriv(0, 1) for c in fp.xi2]])
    coef = np.linalg.solve(basis, dxi)
    expected_tau = np.array([[ct.g111 + ct.g212, 0.0],
                             [0.0, 0.0],
                             [2.0 * ct.g211, 2.0 * ct.g111],
                             [2.0 * ct.g212, 0.0]]).T
    for name, col in zip(("wu1", "wv1", "wu2", "wv2"), range(4)):
        res[name] = np.max(np.abs(coef[2:, col] - expected_tau[:, col]))

    fd = decompose_frame(fp, tol_rank, max_orders=(1, 0))
    h3v, h4v = fd.h_values()
    res["h_normal_form"] = max((h3v - NORMAL_H3).max_abs(),
                               (h4v - NORMAL_H4).max_abs())
    res["christoffels"] = np.max(np.abs(fd.gamma_values() - ct.as_tensor()))
    res["cubic_form"] = cubic_form(fp, fd).max_abs()
    res["parallel_relations"] = max(
        parallel_check_relations(fd, tol=1e-3).values())
    res["coefficient_residual"] = co.residual
    phi = semiconformal_matrix(h3v, h4v)
    ptype = classify_pencil(h3v, h4v, tol_type)
    return res, ptype, phi


def verify_family(kind, u_range=(0.0, 1.0), v_range=(0.0, 1.0),
                  counts=(21, 21), order=DEFAULT_ORDER,
                  tol_rank=DEFAULT_TOL_RANK, tol_type=1e-9):
    """Evaluate all family checks on a grid and collect per-check maxima.

    Grid cells where the curve data degenerates (G, D or c under the rank
    floor) or the frame collapses are clipped and reported rather than
    failing the whole run.
    """
    us = np.linspace(u_range[0], u_range[1], counts[0])
    vs = np.linspace(v_range[0], v_range[1], counts[1])
    if isinstance(kind, FamilyII):
        check_beta(kind, us)
    points, clipped = [], []
    checks = {k: 0.0 for k in _CHECK_KEYS}
    type_counts = {}
    for u in us:
        try:
            co = curve_coefficients(kind, float(u), order, tol_rank)
        except (DegenerateCurve, DegenerateCoefficient) as exc:
            clipped.extend({"u": float(u), "v": float(v),
                            "reason": str(exc)} for v in vs)
            continue
        for v in vs:
            try:
                fp = frame_from_coefficients(kind, co, float(v), tol_rank)
                ct = family_christoffels(kind, co, float(v))
                res, ptype, phi = _point_checks(kind, co, ct, fp,
                                                tol_type, tol_rank)
            except SingularFrame as exc:
                clipped.append({"u": float(u), "v": float(v),
                                "reason": str(exc)})
                continue
            for k, val in res.items():
                checks[k] = max(checks[k], float(val))
            type_counts[ptype.value] = type_counts.get(ptype.value, 0) + 1
            points.append(PointRecord(float(u), float(v), ptype.value,
                                      (phi.s11, phi.s12, phi.s22), res))
    return VerificationReport(
        label=kind.label,
        grid={"u": list(u_range), "v": list(v_range), "counts": list(counts)},
        checks=checks, type_counts=type_counts, points=points,
        clipped=clipped)
