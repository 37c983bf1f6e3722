"""Time each array kernel on the numba path and on the pure-numpy path.

    python3 benchmarks/bench_kernels.py [--n 7] [--repeat 3]

The first numba call per kernel includes compilation (or cache load) and is
reported separately from the steady-state best time.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from monotri import _kernels
from monotri.hecke import build_weak_dag, linear_extension


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=7)
    ap.add_argument("--shelling-n", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    n = args.n
    rows = _kernels.enumerate_rows(n, use_numba=False)
    dag = build_weak_dag(args.shelling_n)
    order = dag.rows[np.asarray(linear_extension(dag, "seeded-random", seed=1))]

    cases = {
        f"enumerate n={n}": lambda nb: _kernels.enumerate_rows(n, use_numba=nb),
        f"pi_images n={n}": lambda nb: _kernels.pi_images(rows, n, use_numba=nb),
        f"descent_histogram n={n}": lambda nb: _kernels.descent_histogram(n, use_numba=nb),
        f"shelling n={args.shelling_n}": lambda nb: _kernels.shelling_failure(order, use_numba=nb),
    }
    print(f"{'kernel':<26}{'numba first':>13}{'numba best':>12}{'numpy best':>12}{'speedup':>9}")
    for name, fn in cases.items():
        t0 = time.perf_counter()
        first = fn(True)
        cold = time.perf_counter() - t0
        reference = fn(False)
        if not np.array_equal(first, reference):
            raise SystemExit(f"{name}: numba and numpy results differ")
        hot = best_of(lambda: fn(True), args.repeat)
        ref = best_of(lambda: fn(False), args.repeat)
        print(f"{name:<26}{cold:>12.3f}s{hot:>11.3f}s{ref:>11.3f}s{ref / hot:>8.1f}x")


if __name__ == "__main__":
    main()
