#!/usr/bin/env python3
"""Benchmark the hot Bessel kernels: numba backend vs pure-numpy fallback.

Times the normalized-Bessel grid evaluation (the inner loop of every
transform matrix build) and a full forward-transform matrix apply.
Outputs a small table, or JSON with --json.
"""

import argparse
import json
import time

import numpy as np

from lcdunkl import _kernels
from lcdunkl.corpus import gauss_profile
from lcdunkl.quadrature import SampledFunction
from lcdunkl.specfun import CanonicalMatrix, bessel_j_grid
from lcdunkl.symfun import evaluate, gaussian
from lcdunkl.transform import _tables, lcdt_forward

WARMUP = 2
RUNS = 5


def best_of(fn, runs=RUNS, warmup=WARMUP):
    for _ in range(warmup):
        fn()
    times = []
    for _ in range(runs):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_backend(name, n_points, umax):
    _kernels.set_backend(name)
    rng = np.random.default_rng(0)
    u = rng.uniform(-umax, umax, n_points)
    results = {}
    for nu in (0.5, 2.0, 6.0):
        results[f"bessel_nu_{nu}"] = best_of(lambda: bessel_j_grid(nu, u))
    prof = gauss_profile(0.5)
    f = SampledFunction(prof.x_rule, evaluate(gaussian(-0.5), prof.x_rule.nodes))
    M = CanonicalMatrix.rotation(1.0)

    def full_transform():
        _tables.clear()  # force the kernel tables to be rebuilt
        lcdt_forward(f, 0.5, M, prof.lam_rule)

    results["transform_matrix_build"] = best_of(full_transform, runs=3, warmup=1)
    return results


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=500_000)
    parser.add_argument("--umax", type=float, default=200.0)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()

    backends = ["numpy"]
    if _kernels.HAVE_NUMBA:
        backends.insert(0, "numba")
    all_results = {}
    for backend in backends:
        all_results[backend] = bench_backend(backend, args.points, args.umax)

    if args.json:
        print(json.dumps({"points": args.points, "umax": args.umax, "results": all_results}, indent=1))
        return
    kernels = list(next(iter(all_results.values())))
    width = max(len(k) for k in kernels)
    header = f"{'kernel':<{width}}  " + "  ".join(f"{b:>10}" for b in backends)
    if len(backends) == 2:
        header += "   speedup"
    print(f"points={args.points} umax={args.umax}")
    print(header)
    for kern in kernels:
        row = f"{kern:<{width}}  " + "  ".join(f"{all_results[b][kern] * 1e3:>8.2f}ms" for b in backends)
        if len(backends) == 2:
            row += f"   {all_results['numpy'][kern] / all_results['numba'][kern]:>6.2f}x"
        print(row)


if __name__ == "__main__":
    main()
