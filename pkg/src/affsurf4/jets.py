"""Truncated Taylor (jet) arithmetic in one and two variables.

Jets store raw derivative values: ``Jet1.derivs[k]`` is the k-th derivative
at the base point (not divided by k!), and ``Jet2.partials[i, j]`` is
d^{i+j}/du^i dv^j.  Entries of a bivariate jet beyond the total order are
kept at exactly zero.  Arithmetic between jets of different orders truncates
to the smaller order; consumers that need a minimum order check explicitly.

All values are float64.  Jets are immutable: every operation allocates.
"""

import math
import numbers

import numpy as np

from . import backend
from ._kernels import MAX_ORDER
from .errors import DegenerateDivisor, DomainError, InvalidOrder

__all__ = [
    "Jet1", "Jet2", "lift", "compose2",
    "sin", "cos", "tan", "exp", "ln", "sqrt", "sinh", "cosh", "powr",
    "FUNCTIONS",
]


def _check_order(order, minimum=0):
    if not isinstance(order, (int, np.integer)) or order < minimum or order > MAX_ORDER:
        raise InvalidOrder(f"jet order must be an integer in [{minimum}, {MAX_ORDER}], got {order!r}")


_TRI_MASKS = {}


def _tri_mask(n):
    mask = _TRI_MASKS.get(n)
    if mask is None:
        idx = np.arange(n + 1)
        mask = (idx[:, None] + idx[None, :] <= n).astype(np.float64)
        _TRI_MASKS[n] = mask
    return mask


def _trunc2(arr, n):
    """Copy the leading (n+1)x(n+1) block, zeroing entries with i+j > n."""
    return arr[:n + 1, :n + 1] * _tri_mask(n)


class Jet1:
    """Univariate jet: value and derivatives d/du up to ``order``."""

    __slots__ = ("derivs",)

    def __init__(self, derivs):
        self.derivs = np.asarray(derivs, dtype=np.float64)

    @classmethod
    def constant(cls, c, order):
        _check_order(order)
        d = np.zeros(order + 1)
        d[0] = c
        return cls(d)

    @classmethod
    def seed(cls, value, order):
        _check_order(order, minimum=1)
        d = np.zeros(order + 1)
        d[0] = value
        d[1] = 1.0
        return cls(d)

    @property
    def order(self):
        return self.derivs.shape[0] - 1

    @property
    def value(self):
        return float(self.derivs[0])

    def truncate(self, order):
        if order > self.order:
            raise InvalidOrder(f"cannot extend order {self.order} jet to order {order}")
        return Jet1(self.derivs[:order + 1].copy())

    def d(self):
        """Jet of the derivative d/du (order drops by one)."""
        if self.order < 1:
            raise InvalidOrder("cannot differentiate an order-0 jet")
        return Jet1(self.derivs[1:].copy())

    def _coerce(self, other):
        if type(other) is Jet1:
            n = min(self.derivs.shape[0], other.derivs.shape[0])
            return self.derivs[:n], other.derivs[:n]
        if isinstance(other, numbers.Real):
            d = np.zeros(self.derivs.shape[0])
            d[0] = float(other)
            return self.derivs, d
        return None, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Jet1(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Jet1(a - b)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Jet1(b - a)

    def __mul__(self, other):
        if type(other) is Jet1:
            a, b = self._coerce(other)
            if a.shape[0] == 1:
                return Jet1(a * b[0])
            return Jet1(backend.jet1_mul(a, b))
        if isinstance(other, numbers.Real):
            return Jet1(self.derivs * float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if type(other) is Jet1:
            if other.derivs[0] == 0.0:
                raise DegenerateDivisor("division by a jet with zero value part")
            a, b = self._coerce(other)
            if a.shape[0] == 1:
                return Jet1(a / b[0])
            return Jet1(backend.jet1_div(a, b))
        if isinstance(other, numbers.Real):
            if float(other) == 0.0:
                raise DegenerateDivisor("division by zero")
            return Jet1(self.derivs / float(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, numbers.Real):
            return Jet1.constant(float(other), self.order) / self
        return NotImplemented

    def __neg__(self):
        return Jet1(-self.derivs)

    def __pow__(self, r):
        if isinstance(r, numbers.Real):
            return powr(self, float(r))
        return NotImplemented

    def __repr__(self):
        return f"Jet1({np.array2string(self.derivs, separator=', ')})"


class Jet2:
    """Bivariate jet in (u, v): mixed partials up to a total order."""

    __slots__ = ("partials",)

    def __init__(self, partials):
        self.partials = np.asarray(partials, dtype=np.float64)

    @classmethod
    def constant(cls, c, order):
        _check_order(order)
        p = np.zeros((order + 1, order + 1))
        p[0, 0] = c
        return cls(p)

    @classmethod
    def seed(cls, variable, value, order):
        _check_order(order, minimum=1)
        p = np.zeros((order + 1, order + 1))
        p[0, 0] = value
        if variable == "u":
            p[1, 0] = 1.0
        elif variable == "v":
            p[0, 1] = 1.0
        else:
            raise ValueError(f"unknown variable {variable!r}, expected 'u' or 'v'")
        return cls(p)

    @property
    def order(self):
        return self.partials.shape[0] - 1

    @property
    def value(self):
        return float(self.partials[0, 0])

    def deriv(self, i, j):
        """Raw mixed partial d^{i+j}/du^i dv^j (0 beyond the stored order)."""
        if i + j > self.order:
            raise InvalidOrder(f"partial ({i},{j}) beyond order {self.order}")
        return float(self.partials[i, j])

    def truncate(self, order):
        if order > self.order:
            raise InvalidOrder(f"cannot extend order {self.order} jet to order {order}")
        return Jet2(_trunc2(self.partials, order))

    def d_u(self):
        if self.order < 1:
            raise InvalidOrder("cannot differentiate an order-0 jet")
        return Jet2(_trunc2(self.partials[1:, :], self.order - 1))

    def d_v(self):
        if self.order < 1:
            raise InvalidOrder("cannot differentiate an order-0 jet")
        return Jet2(_trunc2(self.partials[:, 1:], self.order - 1))

    def _coerce(self, other):
        # for +/- the zero-beyond-total-order invariant must be re-imposed
        if type(other) is Jet2:
            na = self.partials.shape[0]
            nb = other.partials.shape[0]
            if na == nb:
                return self.partials, other.partials
            if na < nb:
                return self.partials, _trunc2(other.partials, na - 1)
            return _trunc2(self.partials, nb - 1), other.partials
        if isinstance(other, numbers.Real):
            p = np.zeros_like(self.partials)
            p[0, 0] = float(other)
            return self.partials, p
        return None, None

    def _coerce_mul(self, other):
        # the product/division kernels only touch entries with i+j below the
        # common order, so plain slices are safe here
        na = self.partials.shape[0]
        nb = other.partials.shape[0]
        if na == nb:
            return self.partials, other.partials
        n = min(na, nb)
        return self.partials[:n, :n], other.partials[:n, :n]

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Jet2(a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Jet2(a - b)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Jet2(b - a)

    def __mul__(self, other):
        if type(other) is Jet2:
            a, b = self._coerce_mul(other)
            if a.shape[0] == 1:
                return Jet2(a * b[0, 0])
            return Jet2(backend.jet2_mul(a, b))
        if isinstance(other, numbers.Real):
            return Jet2(self.partials * float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if type(other) is Jet2:
            if other.partials[0, 0] == 0.0:
                raise DegenerateDivisor("division by a jet with zero value part")
            a, b = self._coerce_mul(other)
            if a.shape[0] == 1:
                return Jet2(a / b[0, 0])
            return Jet2(backend.jet2_div(a, b))
        if isinstance(other, numbers.Real):
            if float(other) == 0.0:
                raise DegenerateDivisor("division by zero")
            return Jet2(self.partials / float(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, numbers.Real):
            return Jet2.constant(float(other), self.order) / self
        return NotImplemented

    def __neg__(self):
        return Jet2(-self.partials)

    def __pow__(self, r):
        if isinstance(r, numbers.Real):
            return powr(self, float(r))
        return NotImplemented

    def __repr__(self):
        return f"Jet2(order={self.order}, value={self.value})"


def lift(jet1):
    """Embed a univariate jet in u as a bivariate jet (constant in v)."""
    n = jet1.order
    p = np.zeros((n + 1, n + 1))
    p[:, 0] = jet1.derivs
    return Jet2(p)


def _one_like(x):
    if isinstance(x, Jet1):
        return Jet1.constant(1.0, x.order)
    return Jet2.constant(1.0, x.order)


def _compose(x, dtab):
    """Jet of f(x) from the derivative table dtab[k] = f^(k)(x.value)."""
    n = x.order
    if isinstance(x, Jet1):
        delta = x.derivs.copy()
        delta[0] = 0.0
        delta = Jet1(delta)
        acc = Jet1.constant(dtab[n] / math.factorial(n), n)
    else:
        delta = x.partials.copy()
        delta[0, 0] = 0.0
        delta = Jet2(delta)
        acc = Jet2.constant(dtab[n] / math.factorial(n), n)
    for k in range(n - 1, -1, -1):
        acc = acc * delta + dtab[k] / math.factorial(k)
    return acc


def compose2(f, a, b):
    """Substitute jets into a bivariate jet: the jet of (u', v') -> f(a, b).

    ``a`` and ``b`` are jets in the new variables whose value parts must
    equal the (u, v) base point of ``f``.  Used for reparametrizations.
    """
    n = min(f.order, a.order, b.order)
    da = a.truncate(n)
    pa = da.partials.copy()
    pa[0, 0] = 0.0
    da = Jet2(pa)
    db = b.truncate(n)
    pb = db.partials.copy()
    pb[0, 0] = 0.0
    db = Jet2(pb)
    acc = None
    for i in range(n, -1, -1):
        # Taylor row in the second slot: sum_j f_{ij}/(i! j!) db^j via Horner
        jmax = n - i
        row = Jet2.constant(f.partials[i, jmax] / (math.factorial(i) * math.factorial(jmax)), n)
        for j in range(jmax - 1, -1, -1):
            row = row * db + f.partials[i, j] / (math.factorial(i) * math.factorial(j))
        acc = row if acc is None else acc * da + row
    return acc


def _is_jet(x):
    return isinstance(x, (Jet1, Jet2))


def _const_like(x, c):
    if isinstance(x, Jet1):
        return Jet1.constant(c, 0)
    return Jet2.constant(c, 0)


def sin(x):
    if not _is_jet(x):
        return math.sin(x)
    if x.order == 0:
        return _const_like(x, math.sin(x.value))
    v = x.value
    cycle = (math.sin(v), math.cos(v), -math.sin(v), -math.cos(v))
    return _compose(x, [cycle[k % 4] for k in range(x.order + 1)])


def cos(x):
    if not _is_jet(x):
        return math.cos(x)
    if x.order == 0:
        return _const_like(x, math.cos(x.value))
    v = x.value
    cycle = (math.cos(v), -math.sin(v), -math.cos(v), math.sin(v))
    return _compose(x, [cycle[k % 4] for k in range(x.order + 1)])


def tan(x):
    if not _is_jet(x):
        if math.cos(x) == 0.0:
            raise DomainError("tan at a pole")
        return math.tan(x)
    c = cos(x)
    if c.value == 0.0:
        raise DomainError("tan at a pole")
    if x.order == 0:
        return _const_like(x, math.tan(x.value))
    return sin(x) / c


def exp(x):
    if not _is_jet(x):
        return math.exp(x)
    if x.order == 0:
        return _const_like(x, math.exp(x.value))
    e = math.exp(x.value)
    return _compose(x, [e] * (x.order + 1))


def ln(x):
    v = x.value if _is_jet(x) else x
    if v <= 0.0:
        raise DomainError(f"ln of non-positive value {v}")
    if not _is_jet(x):
        return math.log(x)
    if x.order == 0:
        return _const_like(x, math.log(v))
    dtab = [math.log(v)]
    for k in range(1, x.order + 1):
        dtab.append((-1.0) ** (k - 1) * math.factorial(k - 1) / v ** k)
    return _compose(x, dtab)


def sqrt(x):
    if not _is_jet(x):
        if x < 0.0:
            raise DomainError(f"sqrt of negative value {x}")
        return math.sqrt(x)
    if x.value <= 0.0:
        raise DomainError(f"sqrt of non-positive value part {x.value}")
    if x.order == 0:
        return _const_like(x, math.sqrt(x.value))
    return powr(x, 0.5)


def sinh(x):
    if not _is_jet(x):
        return math.sinh(x)
    if x.order == 0:
        return _const_like(x, math.sinh(x.value))
    v = x.value
    pair = (math.sinh(v), math.cosh(v))
    return _compose(x, [pair[k % 2] for k in range(x.order + 1)])


def cosh(x):
    if not _is_jet(x):
        return math.cosh(x)
    if x.order == 0:
        return _const_like(x, math.cosh(x.value))
    v = x.value
    pair = (math.cosh(v), math.sinh(v))
    return _compose(x, [pair[k % 2] for k in range(x.order + 1)])


def powr(x, r):
    """x**r for a numeric exponent; integer exponents work for any base."""
    if not _is_jet(x):
        if x == 0.0 and r < 0:
            raise DomainError("zero base with negative exponent")
        if x < 0.0 and not float(r).is_integer():
            raise DomainError(f"negative base {x} with non-integer exponent {r}")
        return float(x) ** r
    if x.order == 0:
        return _const_like(x, powr(x.value, r))
    r = float(r)
    if r.is_integer():
        k = int(r)
        if k == 0:
            return _one_like(x)
        if k < 0:
            if x.value == 0.0:
                raise DomainError("zero value part with negative exponent")
            return powr(_one_like(x) / x, -k)
        # binary exponentiation
        acc = None
        base = x
        while k:
            if k & 1:
                acc = base if acc is None else acc * base
            k >>= 1
            if k:
                base = base * base
        return acc
    v = x.value
    if v <= 0.0:
        raise DomainError(f"non-positive value part {v} with non-integer exponent {r}")
    dtab = []
    coef = 1.0
    for k in range(x.order + 1):
        dtab.append(coef * v ** (r - k))
        coef *= (r - k)
    return _compose(x, dtab)


FUNCTIONS = {
    "sin": sin,
    "cos": cos,
    "tan": tan,
    "exp": exp,
    "ln": ln,
    "sqrt": sqrt,
    "sinh": sinh,
    "cosh": cosh,
}
