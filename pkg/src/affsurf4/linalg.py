"""Fixed-size linear algebra over plain reals and over jet scalars.

Vectors are plain length-4 sequences and 2x2 matrices are numpy arrays;
``det4`` and ``solve4`` work over any scalar ring supporting the arithmetic
operators (floats, Jet1, Jet2).  Jet-valued solves pivot on value parts:
invertibility in the local jet ring is decided by the value part alone.
"""

import numbers
from dataclasses import dataclass

import numpy as np

from .errors import SingularFrame

__all__ = ["value", "det4", "solve4", "Sym2", "vec_value", "DEFAULT_TOL_RANK"]

DEFAULT_TOL_RANK = 1e-9


def value(x):
    """Value part of a scalar (identity on plain numbers)."""
    try:
        return x.value
    except AttributeError:
        return float(x)


def vec_value(vec):
    """Value parts of a vector of scalars as a numpy array."""
    return np.array([value(c) for c in vec])


def det4(c1, c2, c3, c4):
    """Signed determinant of the 4x4 matrix with the given columns.

    Laplace expansion by complementary 2x2 minors; valid over any
    commutative scalar ring.
    """
    def m(a, b, i, j):
        return a[i] * b[j] - a[j] * b[i]

    return (m(c1, c2, 0, 1) * m(c3, c4, 2, 3)
            - m(c1, c2, 0, 2) * m(c3, c4, 1, 3)
            + m(c1, c2, 0, 3) * m(c3, c4, 1, 2)
            + m(c1, c2, 1, 2) * m(c3, c4, 0, 3)
            - m(c1, c2, 1, 3) * m(c3, c4, 0, 2)
            + m(c1, c2, 2, 3) * m(c3, c4, 0, 1))


def frame_floor(cols, tol_rank):
    """Rank floor for a 4-column frame: tol * (max column sup-norm)^4."""
    scale = max(max(abs(value(c)) for c in col) for col in cols)
    return tol_rank * max(scale, 1e-30) ** 4


def solve4(cols, rhs_list, tol_rank=DEFAULT_TOL_RANK):
    """Solve basis * coeffs = rhs for each rhs, over the active scalar ring.

    ``cols`` are the four basis columns.  Raises SingularFrame when the
    value-part determinant falls below the rank floor.  Returns a list of
    coefficient 4-lists, one per right-hand side.
    """
    vmat = np.array([[value(c[i]) for c in cols] for i in range(4)])
    if abs(np.linalg.det(vmat)) <= frame_floor(cols, tol_rank):
        raise SingularFrame("frame determinant below rank floor")

    # Gaussian elimination with partial pivoting on value parts, shared
    # across all right-hand sides.
    a = [[cols[j][i] for j in range(4)] for i in range(4)]
    b = [[rhs[i] for rhs in rhs_list] for i in range(4)]
    nrhs = len(rhs_list)
    inv_diag = [None] * 4
    for k in range(4):
        p = max(range(k, 4), key=lambda r: abs(value(a[r][k])))
        if abs(value(a[p][k])) == 0.0:
            raise SingularFrame("zero pivot in frame solve")
        if p != k:
            a[k], a[p] = a[p], a[k]
            b[k], b[p] = b[p], b[k]
        inv_diag[k] = 1.0 / a[k][k]
        for r in range(k + 1, 4):
            factor = a[r][k] * inv_diag[k]
            for c in range(k + 1, 4):
                a[r][c] = a[r][c] - factor * a[k][c]
            for c in range(nrhs):
                b[r][c] = b[r][c] - factor * b[k][c]
    sols = []
    for c in range(nrhs):
        x = [None] * 4
        for k in range(3, -1, -1):
            acc = b[k][c]
            for j in range(k + 1, 4):
                acc = acc - a[k][j] * x[j]
            x[k] = acc * inv_diag[k]
        sols.append(x)
    return sols


@dataclass(frozen=True)
class Sym2:
    """Symmetric 2x2 bilinear form; entries may be reals or jets."""

    s11: object
    s12: object
    s22: object

    def as_matrix(self):
        return np.array([[value(self.s11), value(self.s12)],
                         [value(self.s12), value(self.s22)]])

    def value_part(self):
        return Sym2(value(self.s11), value(self.s12), value(self.s22))

    def entry(self, i, j):
        if i == 0 and j == 0:
            return self.s11
        if i == 1 and j == 1:
            return self.s22
        return self.s12

    def __add__(self, other):
        return Sym2(self.s11 + other.s11, self.s12 + other.s12, self.s22 + other.s22)

    def __sub__(self, other):
        return Sym2(self.s11 - other.s11, self.s12 - other.s12, self.s22 - other.s22)

    def __mul__(self, k):
        if not isinstance(k, numbers.Real):
            return NotImplemented
        return Sym2(self.s11 * k, self.s12 * k, self.s22 * k)

    __rmul__ = __mul__

    def __neg__(self):
        return Sym2(-self.s11, -self.s12, -self.s22)

    @classmethod
    def from_matrix(cls, m):
        return cls(float(m[0, 0]), float(0.5 * (m[0, 1] + m[1, 0])), float(m[1, 1]))

    def max_abs(self):
        return max(abs(value(self.s11)), abs(value(self.s12)), abs(value(self.s22)))
