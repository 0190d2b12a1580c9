"""Timing comparison of the numba kernels vs the pure-NumPy fallback.

Runs the same orbit-iteration and Lyapunov-sum workloads twice, once per
backend (the fallback is selected in a subprocess with
ECOMAP3D_DISABLE_NUMBA=1), and prints a small table.

Usage: python benchmarks/bench_kernels.py [n_iterations]
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
import time

WORKLOAD = """
import json, time
from ecomap3d import ParamPoint, State3, core, _kernels

n = {n}
p = ParamPoint(4.444, 3.71, 2.734)

# warm-up (includes jit compilation when numba is enabled)
core.iterate(State3(0.37, 0.35, 0.01), p, 16, transient=16)
_kernels.lyapunov_sums(0.37, 0.35, 0.01, p.lam, p.mu, p.beta, 1000, 100, 1e6)

t0 = time.perf_counter()
core.iterate(State3(0.37, 0.35, 0.01), p, 64, transient=n)
t_iter = time.perf_counter() - t0

t0 = time.perf_counter()
_kernels.lyapunov_sums(0.37, 0.35, 0.01, p.lam, p.mu, p.beta, n, 1000, 1e6)
t_lyap = time.perf_counter() - t0

print(json.dumps({{"numba": _kernels.NUMBA_ENABLED,
                   "iterate_s": t_iter, "lyapunov_s": t_lyap}}))
"""


def run_backend(disable_numba: bool, n: int) -> dict:
    env = dict(os.environ, ECOMAP3D_DISABLE_NUMBA="1" if disable_numba else "0")
    res = subprocess.run(
        [sys.executable, "-c", WORKLOAD.format(n=n)],
        capture_output=True, text=True, env=env, check=True,
    )
    return json.loads(res.stdout.strip().splitlines()[-1])


def main() -> None:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 2_000_000
    print(f"workload: {n} map iterations / {n} tangent-frame steps\n")
    jit = run_backend(False, n)
    ref = run_backend(True, n)
    assert jit["numba"] and not ref["numba"]
    print(f"{'kernel':<14} {'numba [s]':>12} {'fallback [s]':>14} {'speedup':>9}")
    for key, label in (("iterate_s", "iterate"), ("lyapunov_s", "lyapunov")):
        sp = ref[key] / jit[key] if jit[key] > 0 else float("inf")
        print(f"{label:<14} {jit[key]:>12.4f} {ref[key]:>14.4f} {sp:>8.1f}x")


if __name__ == "__main__":
    main()
