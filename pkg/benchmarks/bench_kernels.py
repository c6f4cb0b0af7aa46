"""Compare the numba and numpy special-function kernels.

Run ``python benchmarks/bench_kernels.py [--n N] [--repeat R]``.  Both
implementations are called directly so one process covers both; the
end-to-end timing at the bottom uses whichever backend ``RELZETA_NUMBA``
selected.
"""
import argparse
import time

import numpy as np

from relzeta import BACKEND
from relzeta import model as cd
from relzeta._kernels import (digamma_numba, digamma_numpy, loggamma_numba, loggamma_numpy,
                              trigamma_numba, trigamma_numpy)
from relzeta.zeta import zeta_continued


def best_of(func, arg, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        func(arg)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000, help="points per call")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    z = rng.uniform(0.05, 40.0, args.n) + 1j * rng.uniform(-40.0, 40.0, args.n)
    pairs = [("digamma", digamma_numba, digamma_numpy),
             ("trigamma", trigamma_numba, trigamma_numpy),
             ("loggamma", loggamma_numba, loggamma_numpy)]
    print(f"{args.n} complex points, best of {args.repeat}")
    print(f"{'kernel':10s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speedup':>8s} {'max diff':>10s}")
    for name, fast, slow in pairs:
        fast(z[:10])  # compile outside the timing
        tf = best_of(fast, z, args.repeat)
        ts = best_of(slow, z, args.repeat)
        diff = np.max(np.abs(fast(z) - slow(z)) / np.maximum(1.0, np.abs(slow(z))))
        print(f"{name:10s} {1e3 * tf:11.2f} {1e3 * ts:11.2f} {ts / tf:8.1f} {diff:10.1e}")

    m = cd.coulomb_delta_model(cd.ModelParams(0.5, 0.2))
    zeta_continued(m, -0.25)
    t0 = time.perf_counter()
    for s in (-0.25, -0.45, -0.7, -0.9):
        zeta_continued(m, s, 1e-10)
    print(f"zeta at 4 points (backend {BACKEND}): {1e3 * (time.perf_counter() - t0):.1f} ms")


if __name__ == "__main__":
    main()
