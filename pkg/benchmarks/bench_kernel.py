"""Benchmark the compiled table kernel against the pure-Python fallback.

Run from an installed environment:

    python benchmarks/bench_kernel.py

The fallback is exercised directly through poissonk._kernel_py, so one
process measures both paths (no need to re-import with POISSONK_PURE).
"""

import time

import numpy as np

from poissonk import KERNEL_BACKEND, kernel
from poissonk import _kernel_py

CASES = [
    # (k, lambda, n_max, repeats)
    (3, 1.0, 2_000, 200),
    (20, 0.5, 5_000, 50),
    (50, 0.102, 10_000, 20),
    (200, 0.05, 40_000, 5),
]

LOG_CASES = [
    (30, 60.0, 40_000, 5),
    (100, 20.0, 100_000, 2),
]


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    print(f"active backend: {KERNEL_BACKEND}")
    print(f"{'case':<32}{'compiled':>12}{'pure':>12}{'speedup':>10}")
    for k, lam, n_max, repeats in CASES:
        fast = time_call(lambda: kernel.scaled_pmf_values(k, lam, n_max), repeats)
        buf = np.empty(n_max + 1)
        pure = time_call(lambda: _kernel_py.scaled_pmf_fill(k, lam, buf), repeats)
        label = f"linear k={k} n={n_max}"
        print(f"{label:<32}{fast * 1e3:>10.2f}ms{pure * 1e3:>10.2f}ms{pure / fast:>9.1f}x")
    for k, lam, n_max, repeats in LOG_CASES:
        fast = time_call(lambda: kernel.log_scaled_pmf_values(k, lam, n_max), repeats)
        out = np.empty(n_max + 1)
        window = np.zeros(k + 1)

        def pure_call():
            window[:] = 0.0
            _kernel_py.scaled_pmf_log_fill(k, lam, out, window)

        pure = time_call(pure_call, repeats)
        label = f"log    k={k} n={n_max}"
        print(f"{label:<32}{fast * 1e3:>10.2f}ms{pure * 1e3:>10.2f}ms{pure / fast:>9.1f}x")


if __name__ == "__main__":
    main()
