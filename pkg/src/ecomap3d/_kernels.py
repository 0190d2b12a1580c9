"""Hot numerical kernels: orbit iteration and tangent-space propagation.

Both kernels are written as plain Python/NumPy functions and compiled with
numba's @njit at import time.  Setting the environment variable
ECOMAP3D_DISABLE_NUMBA=1 before import keeps the pure-NumPy versions, which
have identical signatures and bit-identical arithmetic (same operation
order); see benchmarks/bench_kernels.py for a speed comparison.
"""

from __future__ import annotations

import math
import os

import numpy as np

NUMBA_ENABLED = os.environ.get("ECOMAP3D_DISABLE_NUMBA", "0") != "1"

_TINY = 1.0e-300


def iterate_orbit(x, y, z, lam, mu, beta, n, transient, bound):
    """Iterate the map transient+n times; return (last-n states, diverged, step).

    On divergence the recording stops early and the returned array is
    truncated at the breach.
    """
    out = np.empty((n, 3))
    diverged = False
    dstep = -1
    count = 0
    total = transient + n
    for k in range(total):
        nx = mu * x * (1.0 - x - y - z)
        ny = beta * y * (x - z)
        nz = lam * y * z
        x, y, z = nx, ny, nz
        if (
            not (abs(x) <= bound and abs(y) <= bound and abs(z) <= bound)
        ) or not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
            diverged = True
            dstep = k + 1
            break
        if k >= transient:
            out[count, 0] = x
            out[count, 1] = y
            out[count, 2] = z
            count += 1
    return out[:count], diverged, dstep


def lyapunov_sums(x, y, z, lam, mu, beta, n, transient, bound):
    """Propagate an orthonormal tangent frame; return accumulated log-stretches.

    Returns (sums3, sums3_at_90pct, n_done, diverged).  sums3 are the raw
    accumulated log norms from modified Gram-Schmidt re-orthonormalization
    applied every iteration; their per-step averages are the Lyapunov
    exponents.  The identity sum(exponents) == mean log|det J| is exact for
    this scheme (product of the three MGS norms is |det J| per step).
    """
    for _ in range(transient):
        nx = mu * x * (1.0 - x - y - z)
        ny = beta * y * (x - z)
        nz = lam * y * z
        x, y, z = nx, ny, nz
        if not (abs(x) <= bound and abs(y) <= bound and abs(z) <= bound):
            return np.zeros(3), np.zeros(3), 0, True

    v = np.eye(3)
    sums = np.zeros(3)
    sums90 = np.zeros(3)
    mark = n - n // 10
    diverged = False
    done = 0
    for k in range(n):
        # Tangent propagation: w_i = J(x,y,z) v_i, evaluated before stepping.
        j00 = mu * (1.0 - 2.0 * x - y - z)
        j01 = -mu * x
        j02 = -mu * x
        j10 = beta * y
        j11 = beta * (x - z)
        j12 = -beta * y
        j21 = lam * z
        j22 = lam * y
        w = np.empty((3, 3))
        for i in range(3):
            w[i, 0] = j00 * v[i, 0] + j01 * v[i, 1] + j02 * v[i, 2]
            w[i, 1] = j10 * v[i, 0] + j11 * v[i, 1] + j12 * v[i, 2]
            w[i, 2] = j21 * v[i, 1] + j22 * v[i, 2]
        # Modified Gram-Schmidt on the three rows of w.
        for i in range(3):
            for jprev in range(i):
                dot = (
                    w[i, 0] * v[jprev, 0]
                    + w[i, 1] * v[jprev, 1]
                    + w[i, 2] * v[jprev, 2]
                )
                w[i, 0] -= dot * v[jprev, 0]
                w[i, 1] -= dot * v[jprev, 1]
                w[i, 2] -= dot * v[jprev, 2]
            nrm = math.sqrt(w[i, 0] ** 2 + w[i, 1] ** 2 + w[i, 2] ** 2)
            if nrm > _TINY:
                v[i, 0] = w[i, 0] / nrm
                v[i, 1] = w[i, 1] / nrm
                v[i, 2] = w[i, 2] / nrm
                sums[i] += math.log(nrm)
            else:
                # Structurally collapsed direction (rank-deficient Jacobian):
                # keep the old direction, charge the log floor.
                sums[i] += math.log(_TINY)
        nx = mu * x * (1.0 - x - y - z)
        ny = beta * y * (x - z)
        nz = lam * y * z
        x, y, z = nx, ny, nz
        done = k + 1
        if k + 1 == mark:
            sums90[0] = sums[0]
            sums90[1] = sums[1]
            sums90[2] = sums[2]
        if not (abs(x) <= bound and abs(y) <= bound and abs(z) <= bound):
            diverged = True
            break
    return sums, sums90, done, diverged


if NUMBA_ENABLED:  # pragma: no cover - exercised via the default test run
    import numba

    iterate_orbit = numba.njit(cache=True)(iterate_orbit)
    lyapunov_sums = numba.njit(cache=True)(lyapunov_sums)
