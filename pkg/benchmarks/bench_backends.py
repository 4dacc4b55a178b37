#!/usr/bin/env python3
"""Compare the numba jet kernels against the pure-numpy fallback.

Two views:
  * microbenchmarks of the four kernels on representative jet shapes;
  * end-to-end family verification (21x21 grid) in a subprocess per
    backend, selected through the AFFSURF4_NO_NUMBA env flag.

Usage: python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np


def _rand_jet2(rng, n):
    arr = rng.uniform(-3, 3, (n + 1, n + 1))
    idx = np.arange(n + 1)
    arr[idx[:, None] + idx[None, :] > n] = 0.0
    return arr


def bench_kernels(repeat):
    from affsurf4 import _kernels as knp
    from affsurf4 import _kernels_numba as knb

    rng = np.random.default_rng(0)
    cases = []
    for n in (2, 6):
        a1, b1 = rng.uniform(-3, 3, (2, n + 1))
        b1[0] = 2.0
        a2, b2 = _rand_jet2(rng, n), _rand_jet2(rng, n)
        b2[0, 0] = 2.0
        cases += [(f"jet1_mul order {n}", (a1, b1), knp.jet1_mul, knb.jet1_mul),
                  (f"jet1_div order {n}", (a1, b1), knp.jet1_div, knb.jet1_div),
                  (f"jet2_mul order {n}", (a2, b2), knp.jet2_mul, knb.jet2_mul),
                  (f"jet2_div order {n}", (a2, b2), knp.jet2_div, knb.jet2_div)]

    print(f"{'kernel':<20} {'numpy us/op':>12} {'numba us/op':>12} {'speedup':>9}")
    for label, args, f_np, f_nb in cases:
        f_nb(*args)  # compile
        loops = 2000
        t_np = min(timeit.repeat(lambda: f_np(*args), number=loops, repeat=repeat)) / loops
        t_nb = min(timeit.repeat(lambda: f_nb(*args), number=loops, repeat=repeat)) / loops
        print(f"{label:<20} {t_np * 1e6:>12.2f} {t_nb * 1e6:>12.2f} {t_np / t_nb:>8.1f}x")


VERIFY_SNIPPET = """
import time
from affsurf4 import backend
from affsurf4.expr import CurveDef
from affsurf4.families import FamilyI2, verify_family
backend.warmup()
kind = FamilyI2(CurveDef.from_strings(["exp(u)", "exp(2*u)", "exp(3*u)", "exp(4*u)"]), 1)
verify_family(kind, counts=(3, 3))
t0 = time.perf_counter()
rep = verify_family(kind)
dt = time.perf_counter() - t0
print(f"{backend.active_backend()}: verify_family I.2 21x21 in {dt:.3f}s "
      f"(max residual {rep.max_residual():.2e})")
"""


def bench_end_to_end():
    sys.stdout.flush()
    for flag in ("0", "1"):
        env = dict(os.environ, AFFSURF4_NO_NUMBA=flag)
        subprocess.run([sys.executable, "-c", VERIFY_SNIPPET], env=env, check=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print("== kernel microbenchmarks ==")
    bench_kernels(args.repeat)
    print("\n== end-to-end family verification ==")
    bench_end_to_end()


if __name__ == "__main__":
    main()
