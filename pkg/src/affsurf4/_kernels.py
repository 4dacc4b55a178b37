"""Pure-numpy reference kernels for truncated jet arithmetic.

Jets store raw derivative values (not Taylor coefficients), so the Leibniz
rule carries binomial weights.  A univariate jet of order n is a float64
array of shape (n+1,); a bivariate jet is (n+1, n+1) with entries i+j <= n
meaningful and everything beyond the total order kept at exactly zero.

The numba twins in ``_kernels_numba`` implement the same contracts; the
active set is chosen in ``backend``.
"""

import numpy as np

MAX_ORDER = 24

# Pascal's triangle, BINOM[n, k] = C(n, k).
BINOM = np.zeros((MAX_ORDER + 1, MAX_ORDER + 1))
BINOM[:, 0] = 1.0
for _n in range(1, MAX_ORDER + 1):
    for _k in range(1, _n + 1):
        BINOM[_n, _k] = BINOM[_n - 1, _k - 1] + BINOM[_n - 1, _k]

# Cached flat-index tables for the bincount-based product kernels.
_MUL1_TABLES = {}
_MUL2_TABLES = {}


def _mul1_table(n):
    tab = _MUL1_TABLES.get(n)
    if tab is None:
        out, ia, ib, w = [], [], [], []
        for k in range(n + 1):
            for i in range(k + 1):
                out.append(k)
                ia.append(i)
                ib.append(k - i)
                w.append(BINOM[k, i])
        tab = (np.array(out), np.array(ia), np.array(ib), np.array(w))
        _MUL1_TABLES[n] = tab
    return tab


def _mul2_table(n):
    tab = _MUL2_TABLES.get(n)
    if tab is None:
        m = n + 1
        out, ia, ib, w = [], [], [], []
        for i in range(m):
            for j in range(m - i):
                for p in range(i + 1):
                    for q in range(j + 1):
                        out.append(i * m + j)
                        ia.append(p * m + q)
                        ib.append((i - p) * m + (j - q))
                        w.append(BINOM[i, p] * BINOM[j, q])
        tab = (np.array(out), np.array(ia), np.array(ib), np.array(w))
        _MUL2_TABLES[n] = tab
    return tab


def jet1_mul(a, b):
    n = a.shape[0] - 1
    out, ia, ib, w = _mul1_table(n)
    terms = w * a[ia] * b[ib]
    return np.bincount(out, weights=terms, minlength=n + 1)


def jet2_mul(a, b):
    n = a.shape[0] - 1
    out, ia, ib, w = _mul2_table(n)
    terms = w * a.ravel()[ia] * b.ravel()[ib]
    return np.bincount(out, weights=terms, minlength=(n + 1) * (n + 1)).reshape(n + 1, n + 1)


def jet1_div(a, b):
    n = a.shape[0] - 1
    inv0 = 1.0 / b[0]
    out = np.zeros(n + 1)
    for k in range(n + 1):
        acc = a[k]
        for i in range(k):
            acc -= BINOM[k, i] * out[i] * b[k - i]
        out[k] = acc * inv0
    return out


def jet2_div(a, b):
    n = a.shape[0] - 1
    inv0 = 1.0 / b[0, 0]
    out = np.zeros((n + 1, n + 1))
    for i in range(n + 1):
        for j in range(n + 1 - i):
            acc = a[i, j]
            for p in range(i + 1):
                for q in range(j + 1):
                    if p == i and q == j:
                        continue
                    acc -= BINOM[i, p] * BINOM[j, q] * out[p, q] * b[i - p, j - q]
            out[i, j] = acc * inv0
    return out
