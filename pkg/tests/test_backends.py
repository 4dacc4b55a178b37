"""The numba kernels and the pure-numpy fallback must agree exactly enough
to be interchangeable, and the env flag must switch between them."""

import os
import subprocess
import sys

import numpy as np

from affsurf4 import _kernels as knp
from affsurf4 import _kernels_numba as knb
from affsurf4 import backend


def _rand_jet2(rng, n):
    arr = rng.uniform(-3, 3, (n + 1, n + 1))
    idx = np.arange(n + 1)
    arr[idx[:, None] + idx[None, :] > n] = 0.0
    return arr


def test_jet1_kernels_agree(rng):
    for _ in range(200):
        n = int(rng.integers(0, 9))
        a = rng.uniform(-3, 3, n + 1)
        b = rng.uniform(-3, 3, n + 1)
        assert np.allclose(knp.jet1_mul(a, b), knb.jet1_mul(a, b), rtol=1e-14, atol=1e-14)
        if abs(b[0]) > 0.1:
            assert np.allclose(knp.jet1_div(a, b), knb.jet1_div(a, b), rtol=1e-12, atol=1e-12)


def test_jet2_kernels_agree(rng):
    for _ in range(200):
        n = int(rng.integers(0, 7))
        a = _rand_jet2(rng, n)
        b = _rand_jet2(rng, n)
        assert np.allclose(knp.jet2_mul(a, b), knb.jet2_mul(a, b), rtol=1e-14, atol=1e-14)
        if abs(b[0, 0]) > 0.1:
            assert np.allclose(knp.jet2_div(a, b), knb.jet2_div(a, b), rtol=1e-12, atol=1e-12)


def test_kernel_outputs_respect_total_order(rng):
    n = 5
    a = _rand_jet2(rng, n)
    b = _rand_jet2(rng, n)
    idx = np.arange(n + 1)
    beyond = idx[:, None] + idx[None, :] > n
    for kern in (knp.jet2_mul, knb.jet2_mul, knp.jet2_div, knb.jet2_div):
        out = kern(a, b if kern in (knp.jet2_mul, knb.jet2_mul) else b + np.eye(n + 1)[0] * 0)
        assert np.all(out[beyond] == 0.0)


def test_env_flag_selects_numpy_backend():
    code = "import affsurf4.backend as b; print(b.active_backend())"
    env = dict(os.environ, AFFSURF4_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    env.pop("AFFSURF4_NO_NUMBA")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"


def test_active_backend_reported():
    assert backend.active_backend() in ("numba", "numpy")
