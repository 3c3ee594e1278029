#!/usr/bin/env python3
"""Benchmark the compiled SMO kernel against the pure-Python fallback.

Run after installing the package:

    python benchmarks/bench_smo.py

Times a full grid-search-sized workload (many solver calls on one kernel
matrix) for several training sizes and prints the speedup.
"""

import time

import numpy as np

from tsxplain._solver import available_backends
from tsxplain.svr import KernelSpec, kernel_matrix

SIZES = (50, 100, 200)
N_FEATURES = 12
REPEATS = 5
TOL = 1e-5
MAX_ITER = 2_000_000


def make_problem(n, seed):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0.0, 1.0, size=(n, N_FEATURES))
    y = (
        40.0
        + 8.0 * np.sin(X[:, 0] * 6.0)
        + 5.0 * X[:, 1]
        - 4.0 * X[:, 2] * X[:, 3]
        + rng.normal(0.0, 0.5, size=n)
    )
    K = kernel_matrix(KernelSpec("rbf", gamma=0.5), X, X)
    return K, y


def time_backend(solve, K, y):
    best = np.inf
    result = None
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        z, gap, iters, ok = solve(K, y, 10.0, 0.1, TOL, MAX_ITER)
        best = min(best, time.perf_counter() - t0)
        result = (z, gap, iters, ok)
    return best, result


def main():
    backends = available_backends()
    if "compiled" not in backends:
        print("compiled backend unavailable; benchmarking pure Python only")

    header = f"{'n':>6} {'iters':>8}" + "".join(f" {name:>12}" for name in backends)
    if len(backends) == 2:
        header += f" {'speedup':>9}"
    print(header)

    for n in SIZES:
        K, y = make_problem(n, seed=n)
        times = {}
        iters = None
        objective = {}
        for name, solve in backends.items():
            elapsed, (z, gap, its, ok) = time_backend(solve, K, y)
            assert ok, f"{name} backend did not converge on n={n}"
            times[name] = elapsed
            iters = its
            beta = z[:n] - z[n:]
            objective[name] = -0.5 * beta @ K @ beta - 0.1 * z.sum() + y @ beta

        if len(objective) == 2:
            drift = abs(objective["python"] - objective["compiled"])
            assert drift < 1e-6 * max(1.0, abs(objective["python"])), (
                f"backends disagree on n={n}: {objective}"
            )

        line = f"{n:>6} {iters:>8}" + "".join(
            f" {times[name] * 1e3:>10.2f}ms" for name in backends
        )
        if len(backends) == 2:
            line += f" {times['python'] / times['compiled']:>8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
