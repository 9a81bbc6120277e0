"""Benchmark the hot kernels with numba JIT against the pure-numpy/Python
fallback (HJB_DISABLE_NUMBA=1).

Run:  python3 benchmarks/benchmark_kernels.py
"""

import json
import os
import subprocess
import sys
import time


def measure() -> dict:
    import numpy as np

    from hjb_illiquid import kernels
    from hjb_illiquid.model import Exponential, MarketParams
    from hjb_illiquid.montecarlo import ConstantPolicy, simulate_objective
    from hjb_illiquid.solver import Grid2D, initial_guess_H4

    p = MarketParams(r=0.03, alpha=0.07, sigma=0.2, mu=0.05, delta=0.02,
                     eta=0.3, rho=0.4, a=1.0)
    m = Exponential(kappa=0.25)
    out = {"numba": kernels.NUMBA_ENABLED}

    grid = Grid2D(0.0, 10.0, 0.5, 4.0, 256, 256)
    W = initial_guess_H4(p, 0.12, grid)
    args = (W, grid.z, grid.h, grid.dz, grid.dh, p.r, p.a, p.mu, p.delta,
            p.eta, p.rho, p.sigma, p.excess_return, 0.12)
    kernels.reduced_h4_interior(*args)  # warm-up / compile
    n_rep = 20 if kernels.NUMBA_ENABLED else 3
    t0 = time.perf_counter()
    for _ in range(n_rep):
        kernels.reduced_h4_interior(*args)
    out["residual_256x256_ms"] = (time.perf_counter() - t0) / n_rep * 1e3

    pol = ConstantPolicy(pi=0.5, c=0.8)
    simulate_objective(p, m, pol, 64, 0.01, 1.0, seed=0)  # warm-up
    n_paths = 4000 if kernels.NUMBA_ENABLED else 400
    t0 = time.perf_counter()
    simulate_objective(p, m, pol, n_paths, 0.01, 10.0, seed=0)
    out["mc_us_per_path_step"] = ((time.perf_counter() - t0)
                                  / (n_paths * 1000) * 1e6)
    return out


def main():
    if os.environ.get("_HJB_BENCH_CHILD"):
        print(json.dumps(measure()))
        return
    results = {}
    for label, disable in (("numba", "0"), ("numpy-fallback", "1")):
        env = dict(os.environ, HJB_DISABLE_NUMBA=disable,
                   _HJB_BENCH_CHILD="1")
        res = subprocess.run([sys.executable, __file__], env=env,
                             capture_output=True, text=True, check=True)
        results[label] = json.loads(res.stdout.strip().splitlines()[-1])
    print(f"{'kernel':<28}{'numba':>14}{'numpy-fallback':>18}{'speedup':>10}")
    for key, unit in (("residual_256x256_ms", "ms"),
                      ("mc_us_per_path_step", "us")):
        a, b = results["numba"][key], results["numpy-fallback"][key]
        print(f"{key:<28}{a:>12.3f} {unit}{b:>16.3f} {unit}{b / a:>9.1f}x")


if __name__ == "__main__":
    main()
