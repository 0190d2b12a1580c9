"""Weak-resonance Arnold tongues and period-m orbit pairs.

The tongue boundaries follow the closed-form T± law; the order-(m-1)
normal-form coefficients are computed by the staged complex pipeline on the
exactly-quadratic in-plane map at E2.  Period-m orbit pairs on the invariant
circle are found by multistart Newton on F^m seeded from a simulated orbit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import root as scipy_root

from . import core
from .core import ParamPoint, State3
from .errors import (
    ComplexAngleUndefined,
    NoOrbitFound,
    OnlyOneOrbitFound,
    OutOfRange,
    StrongResonance,
)
from .reduction import staged_complex_normal_form
from .spectra import RootTriple, char_poly, solve_cubic


@dataclass
class TongueSpec:
    n: int
    m: int
    critical: tuple[float, float]  # (mu*, beta*)
    rho3_0: float
    rho2_0: float
    sigma0_abs: float


@dataclass
class PeriodMOrbit:
    points: list[State3]
    multipliers: RootTriple
    stable: bool
    residual: float
    in_plane: bool = False
    transversal_modulus: float | None = None


@dataclass
class PeriodMOrbitPair:
    stable_orbit: PeriodMOrbit
    saddle_orbit: PeriodMOrbit


def _validate_nm(n: int, m: int) -> None:
    if m <= 4:
        raise StrongResonance(f"m={m} is a strong resonance; tongues need m >= 5")
    if not (0 < n < m):
        raise ValueError("need n/m in (0, 1)")
    if math.gcd(n, m) != 1:
        raise ValueError("n and m must be coprime")


def weak_resonance_point(n: int, m: int) -> tuple[float, float]:
    """(mu*, beta*) where the in-plane pair at E2 equals exp(±2*pi*i*n/m)."""
    _validate_nm(n, m)
    c = math.cos(2.0 * math.pi * n / m)
    beta_star = (4.0 * c - 5.0) / (2.0 * (c - 1.0))
    mu_star = beta_star / (beta_star - 2.0)
    return (mu_star, beta_star)


def _resonant_sets(m: int, trunc: int) -> dict[int, set]:
    """Kept monomials per degree: (j,k) with j - k = 1 (mod m)."""
    out: dict[int, set] = {}
    for d in range(2, trunc + 1):
        out[d] = {(j, d - j) for j in range(d + 1) if (j - (d - j) - 1) % m == 0}
    return out


def tongue_coeffs(n: int, m: int, lam: float = 1.0) -> TongueSpec:
    """Normal-form constants of the tongue at the critical point.

    rho3_0 = Re(conj(t1) * f21) (equals -mu*^3/8), rho2_0 = Im(conj(t1) * f21),
    sigma0_abs = |f_{0,m-1}| after staging through degree m-1.  The eigenvector
    branch with Im t1 < 0 matches the published sign of rho2_0.
    """
    mu_star, beta_star = weak_resonance_point(n, m)
    p = ParamPoint(lam, mu_star, beta_star)
    trunc = m - 1
    t1, M = staged_complex_normal_form(p, _resonant_sets(m, trunc), trunc=trunc, branch=-1)
    val = np.conj(t1) * M.get(2, 1)
    sigma = M.get(0, m - 1)
    return TongueSpec(n, m, (mu_star, beta_star), float(val.real), float(val.imag), float(abs(sigma)))


def tongue_membership(
    mu: float, beta: float, n: int, m: int, spec: TongueSpec | None = None
):
    """(chi1, chi2, T_minus, T_plus, inside) for parameters near the tongue."""
    _validate_nm(n, m)
    if spec is None:
        spec = tongue_coeffs(n, m)
    radial = mu * (beta - 2.0) / beta
    if radial < 1.0:
        raise OutOfRange("parameters are inside the Neimark-Sacker circle region (|t1| < 1)")
    chi1 = math.sqrt(radial) - 1.0
    disc = 4.0 * beta**2 * mu - 4.0 * beta**2 - 4.0 * beta * mu - mu**2
    if disc < 0.0:
        raise ComplexAngleUndefined("in-plane eigenvalues are real at these parameters")
    chi2 = math.atan2(math.sqrt(disc), 2.0 * beta - mu) - 2.0 * math.pi * n / m
    half = (spec.sigma0_abs / abs(spec.rho3_0) ** ((m - 2) / 2.0)) * chi1 ** ((m - 2) / 2.0)
    center = (spec.rho2_0 / spec.rho3_0) * chi1
    t_minus, t_plus = center - half, center + half
    inside = bool(t_minus < chi2 < t_plus)
    return (chi1, chi2, t_minus, t_plus, inside)


# ---------------------------------------------------------------------------
# Period-m orbit pairs by multistart Newton on F^m.
# ---------------------------------------------------------------------------


def _fm_residual(p: ParamPoint, m: int, s: np.ndarray):
    cur = s
    J = np.eye(3)
    for _ in range(m):
        J = core.jacobian(State3.from_array(cur), p) @ J
        cur = core.step_array(cur, p)
    return cur - s, J


def _newton_fm(p: ParamPoint, m: int, s0: np.ndarray):
    """Solve F^m(s) = s by the Powell hybrid method with analytic Jacobian.

    On a weakly locked circle one multiplier of D(F^m) is close to +1, which
    makes plain Newton steps overshoot; the trust-region dogleg is robust to
    the near-singular iteration matrix.
    """

    def fun(s):
        G, J = _fm_residual(p, m, s)
        return G, J - np.eye(3)

    res = scipy_root(fun, s0, jac=True, method="hybr", tol=1.0e-13)
    s = res.x
    if not np.all(np.isfinite(s)) or np.max(np.abs(s)) > 1.0e3:
        return None
    G, _ = _fm_residual(p, m, s)
    if float(np.max(np.abs(G))) > 1.0e-11:
        return None
    return s


def _orbit_of(p: ParamPoint, m: int, s: np.ndarray):
    pts = [s.copy()]
    cur = s
    J = np.eye(3)
    for _ in range(m):
        J = core.jacobian(State3.from_array(cur), p) @ J
        cur = core.step_array(cur, p)
        if len(pts) < m:
            pts.append(cur.copy())
    return pts, J


def _min_period(p: ParamPoint, m: int, s: np.ndarray) -> int:
    cur = s.copy()
    for k in range(1, m + 1):
        cur = core.step_array(cur, p)
        if float(np.max(np.abs(cur - s))) < 1.0e-9:
            return k
    return m


def circle_seed_points(p: ParamPoint, s0: State3, m: int, n_transient: int = 5_000, n_sample: int = 4096):
    """Equally spaced phase seeds from a long orbit on the invariant circle."""
    orb = core.iterate(s0, p, n_sample, transient=n_transient)
    if orb.diverged or orb.states.shape[0] < n_sample:
        raise NoOrbitFound("sampling orbit diverged")
    pts = orb.states
    center = pts.mean(axis=0)
    centered = pts - center
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    u = centered @ vt[0]
    v = centered @ vt[1]
    angles = np.mod(np.arctan2(v, u), 2.0 * math.pi)
    seeds = []
    for k in range(8 * m):
        target = 2.0 * math.pi * k / (8 * m)
        d = np.abs(np.mod(angles - target + math.pi, 2.0 * math.pi) - math.pi)
        seeds.append(pts[int(np.argmin(d))])
    return seeds


def _classify_orbit(p: ParamPoint, pts, J, resid) -> PeriodMOrbit:
    """Stability is judged on the invariant circle.

    For an orbit in the invariant plane z = 0 the Jacobian product is block
    triangular: two in-plane multipliers plus a decoupled transversal factor
    prod(lam * y_i).  The attracting/repelling dichotomy of the locked pair
    refers to the in-plane dynamics, so the transversal modulus is reported
    separately and excluded from the stable/saddle call.
    """
    mult = solve_cubic(char_poly(J))
    moduli = np.sort(mult.moduli())
    in_plane = all(abs(q[2]) < 1.0e-12 for q in pts)
    if in_plane:
        trans = abs(float(np.prod([p.lam * q[1] for q in pts])))
        # drop the modulus closest to the transversal factor
        idx = int(np.argmin(np.abs(moduli - trans)))
        planar = np.delete(moduli, idx)
        stable = bool(np.all(planar < 1.0))
        unstable_on_circle = bool(np.any(planar > 1.0))
    else:
        trans = None
        stable = bool(np.all(moduli < 1.0))
        unstable_on_circle = bool(np.any(moduli > 1.0))
    orbit = PeriodMOrbit(
        [State3.from_array(q) for q in pts], mult, stable, resid, in_plane, trans
    )
    orbit._saddle = (not stable) and unstable_on_circle
    return orbit


def find_period_m_orbits(p: ParamPoint, m: int, seeds=None) -> PeriodMOrbitPair:
    """Locate the attracting/saddle period-m pair on the invariant circle."""
    if seeds is None:
        from .fixed_points import get_fixed_point

        e2 = get_fixed_point(p, "E2").coords
        seeds = []
        for z0 in (0.0, 1.0e-3):
            s0 = State3(e2.x + 2.0e-3, e2.y + 2.0e-3, z0)
            try:
                seeds.extend(circle_seed_points(p, s0, m))
            except NoOrbitFound:
                continue
            # deeply converged points seed the attracting orbit, which the
            # phase seeds can miss when locking is weak
            deep = core.iterate(s0, p, m, transient=500_000)
            if not deep.diverged:
                seeds.extend(deep.states[:m])
        if not seeds:
            raise NoOrbitFound("sampling orbits diverged")
    found = {}
    for seed in seeds:
        s = _newton_fm(p, m, np.asarray(seed, dtype=float))
        if s is None:
            continue
        if _min_period(p, m, s) != m:
            continue
        pts, J = _orbit_of(p, m, s)
        if any(q[0] <= 0.0 or q[1] <= 0.0 for q in pts):
            continue  # off the ecologically relevant circle (axis cycles)
        canon = min(tuple(np.round(q, 8)) for q in pts)
        if canon in found:
            continue
        G, _ = _fm_residual(p, m, s)
        found[canon] = _classify_orbit(p, pts, J, float(np.max(np.abs(G))))
    stable = [o for o in found.values() if o.stable]
    saddle = [o for o in found.values() if getattr(o, "_saddle", False)]
    if not stable and not saddle:
        raise NoOrbitFound(f"no period-{m} orbit located from {len(seeds)} seeds")
    if not stable or not saddle:
        raise OnlyOneOrbitFound(
            f"found {len(stable)} attracting and {len(saddle)} saddle period-{m} orbits"
        )
    return PeriodMOrbitPair(stable[0], saddle[0])
