"""Selection of the jet-kernel backend.

The hot inner loops (truncated Leibniz products and divisions) exist twice:
numba-compiled in ``_kernels_numba`` and pure numpy in ``_kernels``.  The
numba set is the default; set ``AFFSURF4_NO_NUMBA=1`` to force the numpy
fallback (the fallback is also chosen automatically when numba cannot be
imported).  ``benchmarks/bench_backends.py`` compares the two.
"""

import os

from . import _kernels as _numpy_kernels

_FLAG = os.environ.get("AFFSURF4_NO_NUMBA", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false")

if not _DISABLED:
    try:
        from . import _kernels_numba as _active
        _NAME = "numba"
    except ImportError:
        _active = _numpy_kernels
        _NAME = "numpy"
else:
    _active = _numpy_kernels
    _NAME = "numpy"

jet1_mul = _active.jet1_mul
jet1_div = _active.jet1_div
jet2_mul = _active.jet2_mul
jet2_div = _active.jet2_div


def active_backend():
    """Name of the kernel set in use: 'numba' or 'numpy'."""
    return _NAME


def warmup():
    """Trigger JIT compilation of all kernels (no-op on the numpy backend)."""
    import numpy as np
    a = np.array([1.0, 2.0, 3.0])
    jet1_div(jet1_mul(a, a), a)
    m = np.zeros((3, 3))
    m[0, 0] = 1.0
    m[1, 0] = 2.0
    m[0, 1] = 3.0
    jet2_div(jet2_mul(m, m), m)
