#!/usr/bin/env python3
"""Benchmark the jitted stepping kernel against the pure-numpy fallback.

The workload is the production inner loop: CFL-limited explicit steps of
the radial flow with an oscillating boundary. Reported rates are node
updates per second; the last column is the numba speedup.

Usage: python benchmarks/kernel_bench.py [--nodes N ...] [--target-steps S]
"""

import argparse
import time

import numpy as np

from hypflow._kernels import advance_numba, advance_numpy, BOUNDARY_OSCILLATION
from hypflow.solver import RadialGrid


def workload(n_nodes: int):
    grid = RadialGrid(4.0, n_nodes)
    v = 0.1 * np.sin(1.3 * grid.r)
    return grid, v


def run(kernel, grid, v0, target_steps: int) -> tuple[float, int]:
    v = v0.copy()
    # long horizon; the step count, not the horizon, ends the measurement
    t, steps, elapsed = 0.0, 0, 0.0
    chunk = max(target_steps // 8, 1)
    while steps < target_steps:
        t_target = t + chunk * 0.45 * grid.dr ** 2 * np.exp(2.0 * v.min()) / 2.0
        tic = time.perf_counter()
        t, done, _ = kernel(v, t, t_target, grid.dr, grid.coth, 0.45,
                            BOUNDARY_OSCILLATION, float(v0[-1]), 0.5, 1.0, 1.0, 50.0)
        elapsed += time.perf_counter() - tic
        steps += int(done)
    return elapsed, steps


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nodes", type=int, nargs="+", default=[101, 201, 401, 801])
    parser.add_argument("--target-steps", type=int, default=200_000)
    args = parser.parse_args()

    jitted = advance_numba()
    # compile outside the timed region
    g, v = workload(64)
    jitted(v.copy(), 0.0, 1e-6, g.dr, g.coth, 0.45, BOUNDARY_OSCILLATION,
           0.0, 0.5, 1.0, 1.0, 50.0)

    print(f"{'nodes':>6} {'numba Mup/s':>12} {'numpy Mup/s':>12} {'speedup':>8}")
    for n in args.nodes:
        grid, v0 = workload(n)
        t_nb, s_nb = run(jitted, grid, v0, args.target_steps)
        t_np, s_np = run(advance_numpy, grid, v0, max(args.target_steps // 20, 1))
        rate_nb = s_nb * n / t_nb / 1e6
        rate_np = s_np * n / t_np / 1e6
        print(f"{n:>6} {rate_nb:>12.1f} {rate_np:>12.1f} {rate_nb / rate_np:>8.1f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
