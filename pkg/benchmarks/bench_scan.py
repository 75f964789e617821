"""Benchmark the grid-scan kernels: numba backend against the numpy fallback.

Runs the same term tables through both backends on an identical grid, checks
that the outputs agree bit for bit, and reports best-of-N wall times.

    python3 benchmarks/bench_scan.py --grid 200 --repeats 5
"""

import argparse
import time

import numpy as np

from extremal_lab import _kernels
from extremal_lab.critical import _geometric_grid, _term_tables


def time_backend(backend, alphas, deltas, tables, repeats):
    # first call pays any JIT compilation; time the steady state
    _kernels.scan_eval(alphas, deltas, tables, backend=backend)
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = _kernels.scan_eval(alphas, deltas, tables, backend=backend)
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--grid", type=int, default=200,
                        help="cells per axis (default 200)")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timed repetitions per backend (default 5)")
    args = parser.parse_args()

    alphas, _ = _geometric_grid(0.05, 20.0, args.grid)
    deltas = np.linspace(0.0, 10.0, args.grid)
    tables = _term_tables()
    cells = args.grid * args.grid

    rows = []
    results = {}
    for backend in ("numba", "numpy"):
        try:
            best, out = time_backend(backend, alphas, deltas, tables, args.repeats)
        except ValueError as exc:
            print(f"{backend}: skipped ({exc})")
            continue
        results[backend] = out
        rows.append((backend, best, cells / best / 1e6))

    print(f"grid {args.grid} x {args.grid} ({cells} cells), best of {args.repeats}")
    print(f"{'backend':<8}  {'seconds':>10}  {'Mcells/s':>9}")
    for backend, best, rate in rows:
        print(f"{backend:<8}  {best:>10.4f}  {rate:>9.2f}")
    if len(rows) == 2:
        print(f"speedup: {rows[1][1] / rows[0][1]:.2f}x (numba over numpy)")

    if len(results) == 2:
        va, ga = results["numba"]
        vb, gb = results["numpy"]
        same = va.tobytes() == vb.tobytes() and ga.tobytes() == gb.tobytes()
        print(f"outputs bit-identical: {same}")
        return 0 if same else 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
