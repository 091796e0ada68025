"""Compare the numba and pure-numpy kernel paths.

Run ``python3 benchmarks/bench_kernels.py``.  Each kernel is warmed up once
(so numba compilation is excluded) and then timed as the best of several
repeats.
"""
import argparse
import math
import time

import numpy as np

from specbound import _jit, kernels
from specbound.weights import WeightSpec


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--n", type=int, default=7, help="matrix size for the ordering sweep")
    args = ap.parse_args()
    if not _jit.HAVE_NUMBA:
        print("numba is not installed; only the numpy path is available")

    rng = np.random.default_rng(0)
    n = args.n
    T = np.triu(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    swaps = kernels.plain_changes(n)
    lw = WeightSpec.schatten_lorentz(1).bar().dot().log_values(100_000)

    cases = [
        (f"ordering sweep n={n} ({math.factorial(n)} orders)",
         lambda: kernels.sweep_orderings_numpy(T, swaps),
         lambda: kernels.sweep_orderings_jit(T, swaps)),
        ("series for F, r=50",
         lambda: kernels.log_weighted_series_numpy(lw, math.log(100.0), 1e-14),
         lambda: kernels.log_weighted_series_jit(lw, math.log(100.0), 1e-14)),
        ("series for F, r=0.5 (x200 calls)",
         lambda: [kernels.log_weighted_series_numpy(lw, 0.0, 1e-14) for _ in range(200)],
         lambda: [kernels.log_weighted_series_jit(lw, 0.0, 1e-14) for _ in range(200)]),
    ]
    print(f"{'kernel':44s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    for name, f_np, f_jit in cases:
        t_np = best_of(f_np, args.repeat)
        if _jit.HAVE_NUMBA:
            t_jit = best_of(f_jit, args.repeat)
            print(f"{name:44s} {1e3 * t_np:11.2f} {1e3 * t_jit:11.2f} {t_np / t_jit:8.1f}x")
        else:
            print(f"{name:44s} {1e3 * t_np:11.2f} {'n/a':>11s}")


if __name__ == "__main__":
    main()
