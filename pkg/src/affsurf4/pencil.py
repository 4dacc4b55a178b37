"""Two-pencils of symmetric 2x2 forms under frame changes.

A pair (h3, h4) spans a two-pencil inside Sym(2).  Identifying Sym(2) with
Minkowski 3-space via the basis E0, E1, E2 and the quadratic form
q(h) = -det h, the span is a space-, light- or timelike plane, line, or the
origin; this fixes the surface type (I, II, III, IVa-IVd) together with the
degeneracy class of the semiconformal form phi.

The frame-change action splits into a congruence part rho1 (P acting on the
tangent indices) and a recombination part rho2 (Q^-1 mixing the pair), and
``normalize_pencil`` constructs an explicit (P, Qinv) mapping any pencil
onto the normal form of its orbit.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularTransform
from .linalg import Sym2

__all__ = [
    "PencilType", "PhiClass", "NormalizationResult",
    "E0", "E1", "E2", "NORMAL_PAIRS", "TYPE_TO_PHI",
    "q", "to_mink", "from_mink", "rho1_apply", "rho2_apply",
    "semiconformal_matrix", "classify_pencil", "classify_phi",
    "normalize_pencil",
]

DEFAULT_TOL = 1e-9

E0 = Sym2(1.0, 0.0, 1.0)
E1 = Sym2(1.0, 0.0, -1.0)
E2 = Sym2(0.0, 1.0, 0.0)
_ZERO = Sym2(0.0, 0.0, 0.0)
_N = Sym2(1.0, 0.0, 0.0)  # (E0 + E1)/2, the lightlike normal-form generator


class PencilType(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IVa = "IVa"
    IVb = "IVb"
    IVc = "IVc"
    IVd = "IVd"


class PhiClass(enum.Enum):
    DEFINITE = "nondegenerate-definite"
    INDEFINITE = "nondegenerate-indefinite"
    ONE_DEGENERATE = "1-degenerate"
    ZERO_DEGENERATE = "0-degenerate"


NORMAL_PAIRS = {
    PencilType.I: (E1, E2),
    PencilType.II: (E2, _N),
    PencilType.III: (E0, E1),
    PencilType.IVa: (E1, _ZERO),
    PencilType.IVb: (_N, _ZERO),
    PencilType.IVc: (E0, _ZERO),
    PencilType.IVd: (_ZERO, _ZERO),
}

TYPE_TO_PHI = {
    PencilType.I: PhiClass.DEFINITE,
    PencilType.II: PhiClass.ONE_DEGENERATE,
    PencilType.III: PhiClass.INDEFINITE,
    PencilType.IVa: PhiClass.ZERO_DEGENERATE,
    PencilType.IVb: PhiClass.ZERO_DEGENERATE,
    PencilType.IVc: PhiClass.ZERO_DEGENERATE,
    PencilType.IVd: PhiClass.ZERO_DEGENERATE,
}


@dataclass(frozen=True)
class NormalizationResult:
    ptype: PencilType
    P: np.ndarray          # 2x2, det != 0
    Qinv: np.ndarray       # 2x2, invertible
    normal_pair: tuple     # (Sym2, Sym2), exactly the table constants


def q(h):
    """Invariant quadratic form q(h) = -det h."""
    return -(h.s11 * h.s22 - h.s12 * h.s12)


def to_mink(h):
    """Coordinates (a, b, c) of h = a E0 + b E1 + c E2 (metric diag(-1,1,1))."""
    return np.array([0.5 * (h.s11 + h.s22), 0.5 * (h.s11 - h.s22), h.s12])


def from_mink(w):
    a, b, c = float(w[0]), float(w[1]), float(w[2])
    return Sym2(a + b, c, a - b)


def _qm(w):
    return -w[0] * w[0] + w[1] * w[1] + w[2] * w[2]


def _bq(w1, w2):
    return -w1[0] * w2[0] + w1[1] * w2[1] + w1[2] * w2[2]


def rho1_apply(P, h):
    """Congruence action h -> P h P^T of a frame change on the tangent side."""
    P = np.asarray(P, dtype=float)
    if np.linalg.det(P) == 0.0:
        raise SingularTransform("rho1 requires det P != 0")
    m = P @ h.as_matrix() @ P.T
    return Sym2.from_matrix(m)


def rho2_apply(Qinv, pair):
    """Recombination of the pair by Q^-1: out_a = sum_b Qinv[b, a] pair_b."""
    Qinv = np.asarray(Qinv, dtype=float)
    if np.linalg.det(Qinv) == 0.0:
        raise SingularTransform("rho2 requires an invertible matrix")
    h3, h4 = pair
    return (Qinv[0, 0] * h3 + Qinv[1, 0] * h4,
            Qinv[0, 1] * h3 + Qinv[1, 1] * h4)


def semiconformal_matrix(h3, h4):
    """The form phi = det psi built from the pair of fundamental forms.

    Components: phi_kl = (h3_1k h4_2l + h3_1l h4_2k - h3_2k h4_1l
    - h3_2l h4_1k) / 2.  Antisymmetric under swapping h3 and h4; works over
    any scalar ring.
    """
    a = [[h3.s11, h3.s12], [h3.s12, h3.s22]]
    b = [[h4.s11, h4.s12], [h4.s12, h4.s22]]

    def comp(k, l):
        return 0.5 * (a[0][k] * b[1][l] + a[0][l] * b[1][k]
                      - a[1][k] * b[0][l] - a[1][l] * b[0][k])

    return Sym2(comp(0, 0), comp(0, 1), comp(1, 1))


def _span(h3, h4, tol):
    """Numerical span of the pencil in Minkowski coordinates.

    Returns (rank, basis) where basis columns are a Euclidean-orthonormal
    basis of the span.
    """
    w = np.column_stack([to_mink(h3), to_mink(h4)])
    u, s, vt = np.linalg.svd(w)
    if s[0] == 0.0:
        return 0, u[:, :0], s, vt
    rank = int(np.sum(s > tol * s[0]))
    return rank, u[:, :rank], s, vt


def classify_pencil(h3, h4, tol=DEFAULT_TOL):
    """Type of the pencil from span dimension and the signature of q on it."""
    rank, basis, _, _ = _span(h3, h4, tol)
    if rank == 0:
        return PencilType.IVd
    eta = np.diag([-1.0, 1.0, 1.0])
    gram = basis.T @ eta @ basis
    eigs = np.linalg.eigvalsh(gram)
    # the basis is Euclidean-orthonormal, so |eigs| <= 1: absolute threshold
    n_pos = int(np.sum(eigs > tol))
    n_neg = int(np.sum(eigs < -tol))
    if rank == 2:
        if n_pos == 2:
            return PencilType.I
        if n_pos == 1 and n_neg == 1:
            return PencilType.III
        return PencilType.II
    if n_pos == 1:
        return PencilType.IVa
    if n_neg == 1:
        return PencilType.IVc
    return PencilType.IVb


def classify_phi(phi, tol=DEFAULT_TOL, scale=None):
    """Degeneracy class of a symmetric form by eigenvalue-sign census.

    The zero threshold is tol * scale.  By default the scale is the largest
    eigenvalue magnitude; pass an external ``scale`` (e.g. the product of
    the norms of the generating pair, phi being quadratic in it) when a
    noise-level phi must classify as zero.
    """
    eigs = np.linalg.eigvalsh(phi.as_matrix())
    if scale is None:
        scale = np.max(np.abs(eigs))
    if scale == 0.0:
        return PhiClass.ZERO_DEGENERATE
    nonzero = eigs[np.abs(eigs) > tol * scale]
    if nonzero.size == 0:
        return PhiClass.ZERO_DEGENERATE
    if nonzero.size == 1:
        return PhiClass.ONE_DEGENERATE
    return PhiClass.DEFINITE if nonzero[0] * nonzero[1] > 0 else PhiClass.INDEFINITE


class _Worker:
    """Accumulates recombination and congruence steps on a working pair."""

    def __init__(self, h3, h4):
        self.pair = [h3, h4]
        self.P = np.eye(2)
        self.T = np.eye(2)  # rows give the current slots as combos of the input

    def recomb(self, t):
        t = np.asarray(t, dtype=float)
        p1 = t[0, 0] * self.pair[0] + t[0, 1] * self.pair[1]
        p2 = t[1, 0] * self.pair[0] + t[1, 1] * self.pair[1]
        self.pair = [p1, p2]
        self.T = t @ self.T

    def congr(self, p):
        p = np.asarray(p, dtype=float)
        self.pair = [Sym2.from_matrix(p @ h.as_matrix() @ p.T) for h in self.pair]
        self.P = p @ self.P

    @property
    def qinv(self):
        return self.T.T.copy()

    def minks(self):
        return [to_mink(h) for h in self.pair]


def _congr_to_signs(h, order_desc=True):
    """Congruence P with P h P^T = diag of signs (eigenvalues rescaled)."""
    lam, rot = np.linalg.eigh(h.as_matrix())
    idx = np.argsort(-lam) if order_desc else np.argsort(lam)
    lam = lam[idx]
    rot = rot[:, idx]
    scale = np.array([1.0 / math.sqrt(abs(l)) if abs(l) > 0 else 1.0 for l in lam])
    return np.diag(scale) @ rot.T


def _rank1_to_n(h):
    """Congruence P sending a rank-1 positive generator onto (E0+E1)/2."""
    lam, rot = np.linalg.eigh(h.as_matrix())
    k = int(np.argmax(np.abs(lam)))
    r = rot[:, k]
    rot_to_e1 = np.array([[r[0], r[1]], [-r[1], r[0]]])
    return np.diag([1.0 / math.sqrt(lam[k]), 1.0]) @ rot_to_e1


def normalize_pencil(h3, h4, tol=DEFAULT_TOL):
    """Constructive normal form of a pencil.

    Returns a NormalizationResult whose (P, Qinv) map the input onto the
    exact table normal form: rho1(P) o rho2(Qinv) applied to (h3, h4)
    reproduces ``normal_pair`` up to rounding.
    """
    ptype = classify_pencil(h3, h4, tol)
    target = NORMAL_PAIRS[ptype]

    # fast path: already in normal form
    if all(np.allclose(h.as_matrix(), t.as_matrix(), rtol=0.0, atol=0.0)
           for h, t in zip((h3, h4), target)):
        return NormalizationResult(ptype, np.eye(2), np.eye(2), target)

    wk = _Worker(h3, h4)
    if ptype is PencilType.IVd:
        return NormalizationResult(ptype, np.eye(2), np.eye(2), target)

    # rotate the pair so the slots align with the singular directions
    _, _, _, vt = _span(h3, h4, tol)
    wk.recomb(vt)

    if ptype in (PencilType.IVa, PencilType.IVb, PencilType.IVc):
        g = wk.pair[0]
        if ptype is PencilType.IVa:
            wk.congr(_congr_to_signs(g))                      # -> diag(1,-1) = E1
        elif ptype is PencilType.IVc:
            if g.s11 + g.s22 < 0:
                wk.recomb(np.diag([-1.0, 1.0]))
            wk.congr(_congr_to_signs(wk.pair[0]))             # -> diag(1,1) = E0
        else:
            lam, _ = np.linalg.eigh(g.as_matrix())
            if lam[np.argmax(np.abs(lam))] < 0:
                wk.recomb(np.diag([-1.0, 1.0]))
            wk.congr(_rank1_to_n(wk.pair[0]))                 # -> (E0+E1)/2
    elif ptype is PencilType.I:
        m1, m2 = wk.minks()
        wk.recomb(np.diag([1.0 / math.sqrt(_qm(m1)), 1.0]))
        m1, m2 = wk.minks()
        wk.recomb(np.array([[1.0, 0.0], [-_bq(m2, m1), 1.0]]))
        m2 = wk.minks()[1]
        wk.recomb(np.diag([1.0, 1.0 / math.sqrt(_qm(m2))]))
        wk.congr(_congr_to_signs(wk.pair[0]))                 # slot1 -> E1
        m2 = wk.minks()[1]
        # boost in the (E0, E2) plane fixing E1, killing the E0 component
        phi_b = math.atanh(-m2[0] / m2[2])
        ch, sh = math.cosh(phi_b / 2.0), math.sinh(phi_b / 2.0)
        wk.congr(np.array([[ch, sh], [sh, ch]]))
        if wk.minks()[1][2] < 0:
            wk.recomb(np.diag([1.0, -1.0]))                   # slot2 -> E2
    elif ptype is PencilType.III:
        m1, m2 = wk.minks()
        gram = np.array([[_bq(m1, m1), _bq(m1, m2)], [_bq(m1, m2), _bq(m2, m2)]])
        mu, s = np.linalg.eigh(gram)
        t = np.array([s[:, 0] / math.sqrt(-mu[0]), s[:, 1] / math.sqrt(mu[1])])
        wk.recomb(t)
        if wk.pair[0].s11 + wk.pair[0].s22 < 0:
            wk.recomb(np.diag([-1.0, 1.0]))
        wk.congr(_congr_to_signs(wk.pair[0]))                 # slot1 -> E0
        m2 = wk.minks()[1]
        # rho1 of a rotation by theta fixes E0 and turns the (E1, E2)
        # plane by +2 theta
        theta = -0.5 * math.atan2(m2[2], m2[1])
        c, s_ = math.cos(theta), math.sin(theta)
        wk.congr(np.array([[c, -s_], [s_, c]]))               # slot2 -> E1
    else:  # type II
        m1, m2 = wk.minks()
        gram = np.array([[_qm(m1), _bq(m1, m2)], [_bq(m1, m2), _qm(m2)]])
        mu, s = np.linalg.eigh(gram)
        k_null = int(np.argmin(np.abs(mu)))
        k_space = 1 - k_null
        t = np.array([s[:, k_space] / math.sqrt(mu[k_space]), s[:, k_null]])
        wk.recomb(t)
        lam, _ = np.linalg.eigh(wk.pair[1].as_matrix())
        if lam[np.argmax(np.abs(lam))] < 0:
            wk.recomb(np.diag([1.0, -1.0]))
        wk.congr(_rank1_to_n(wk.pair[1]))                     # slot2 -> (E0+E1)/2
        m1 = wk.minks()[0]
        wk.recomb(np.array([[1.0, -2.0 * m1[0]], [0.0, 1.0]]))
        m1 = wk.minks()[0]
        wk.recomb(np.diag([1.0 / m1[2], 1.0]))                # slot1 -> E2

    return NormalizationResult(ptype, wk.P, wk.qinv, target)
