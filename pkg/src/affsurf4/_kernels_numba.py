"""Numba-compiled twins of the jet kernels in ``_kernels``."""

import numpy as np
from numba import njit

from ._kernels import BINOM

_BINOM = np.ascontiguousarray(BINOM)


@njit(cache=True)
def jet1_mul(a, b):
    n = a.shape[0] - 1
    out = np.zeros(n + 1)
    for k in range(n + 1):
        acc = 0.0
        for i in range(k + 1):
            acc += _BINOM[k, i] * a[i] * b[k - i]
        out[k] = acc
    return out


@njit(cache=True)
def jet1_div(a, b):
    n = a.shape[0] - 1
    inv0 = 1.0 / b[0]
    out = np.zeros(n + 1)
    for k in range(n + 1):
        acc = a[k]
        for i in range(k):
            acc -= _BINOM[k, i] * out[i] * b[k - i]
        out[k] = acc * inv0
    return out


@njit(cache=True)
def jet2_mul(a, b):
    n = a.shape[0] - 1
    out = np.zeros((n + 1, n + 1))
    for i in range(n + 1):
        for j in range(n + 1 - i):
            acc = 0.0
            for p in range(i + 1):
                for q in range(j + 1):
                    acc += _BINOM[i, p] * _BINOM[j, q] * a[p, q] * b[i - p, j - q]
            out[i, j] = acc
    return out


@njit(cache=True)
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
                    acc -= _BINOM[i, p] * _BINOM[j, q] * out[p, q] * b[i - p, j - q]
            out[i, j] = acc * inv0
    return out
