#!/usr/bin/env python3
"""Compare the numba-compiled kernels against their pure-numpy twins.

Usage:
    python benchmarks/bench_kernels.py [--repeat N]

The first compiled call (JIT warm-up / cache load) is timed separately.
"""

import argparse
import time

import numpy as np

from hulthen_aim import _kernels
from hulthen_aim.hulthen import HulthenParams, v_effective
from hulthen_aim.numerov import RadialGrid


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if _kernels.numerov_outward_jit is None:
        raise SystemExit("numba is not available; nothing to compare")

    p = HulthenParams(0.1)
    grid = RadialGrid.for_energy(-0.016)
    k2 = np.ascontiguousarray(2.0 * (-0.016 - v_effective(grid.r, p, 1)))
    h = grid.h
    u0, u1 = grid.r[0] ** 2, grid.r[1] ** 2

    rng = np.random.default_rng(0)
    a = rng.normal(size=(2000, 12))
    b = rng.normal(size=(2000, 12))
    b[:, 0] += 5.0

    cases = [
        ("numerov_outward (40001 pts)",
         lambda: _kernels.numerov_outward_py(k2, h, u0, u1),
         lambda: _kernels.numerov_outward_jit(k2, h, u0, u1)),
        ("cauchy_product (2000 x 12)",
         lambda: _kernels.cauchy_product_py(a, b),
         lambda: _kernels.cauchy_product_jit(a, b)),
        ("series_divide (2000 x 12)",
         lambda: _kernels.series_divide_py(a, b),
         lambda: _kernels.series_divide_jit(a, b)),
    ]
    print(f"{'kernel':32s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'first call [ms]':>16s} {'speedup':>8s}")
    for name, py, jit in cases:
        t0 = time.perf_counter()
        jit()
        warm = time.perf_counter() - t0
        tp = _best(py, args.repeat)
        tj = _best(jit, args.repeat)
        print(f"{name:32s} {tp * 1e3:11.3f} {tj * 1e3:11.3f} {warm * 1e3:16.1f} {tp / tj:8.1f}x")


if __name__ == "__main__":
    main()
