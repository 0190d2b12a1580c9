"""Marotto snap-back-repeller chaos certification at E2.

Expanding fixed-point tests via the characteristic cubic and its depressed
form, the parameter region W where E2 is a repeller, axis-aligned expanding
neighborhoods grown by bisection, and snap-back preimage chains solved in
closed form on the invariant plane z = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import core
from .core import ParamPoint, State3
from .errors import NoSnapBackFound, NotExpandingAtCenter
from .fixed_points import get_fixed_point
from .spectra import char_poly, solve_cubic


@dataclass
class ExpandingReport:
    point: State3
    MNW: tuple[float, float, float]
    depressed: tuple[float, float]
    delta_bar: float
    moduli: np.ndarray
    expanding: bool


@dataclass
class RegionW:
    in_region: bool
    margins: tuple[float, float, float]


@dataclass
class Box:
    lo: np.ndarray
    hi: np.ndarray

    def contains(self, s, tol: float = 0.0) -> bool:
        v = np.asarray(s, dtype=float)
        return bool(np.all(v >= self.lo - tol) and np.all(v <= self.hi + tol))

    def sample_grid(self, n: int) -> np.ndarray:
        axes = [np.linspace(self.lo[i], self.hi[i], n) for i in range(3)]
        g = np.meshgrid(*axes, indexing="ij")
        return np.stack([a.ravel() for a in g], axis=1)


@dataclass
class SnapBackCertificate:
    fixed_point: State3
    expanding_box: Box
    preimage_chain: list[State3]  # [E', E'', ..., last maps to E2]
    residual: float
    det_DF2: float
    valid: bool
    reference: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Expanding tests.
# ---------------------------------------------------------------------------


def char_coeffs_MNW(s: State3, p: ParamPoint) -> tuple[float, float, float]:
    """Coefficients (M, N, W) of t^3 + M t^2 + N t + W = det(tI - J(s))."""
    x, y, z = s.x, s.y, s.z
    lam, mu, beta = p.lam, p.mu, p.beta
    M = (2.0 * x + y + z - 1.0) * mu - beta * (x - z) - lam * y
    # N is the sum of the principal 2x2 minors of the Jacobian
    a = mu * (1.0 - 2.0 * x - y - z)
    N = (
        a * beta * (x - z)
        + mu * beta * x * y
        + lam * y * a
        + lam * beta * y * (x - z)
        + lam * beta * y * z
    )
    W = 2.0 * lam * mu * beta * y * x * (x + z - 0.5)
    return (M, N, W)


def expanding_at(s: State3, p: ParamPoint, tol: float = 0.0) -> ExpandingReport:
    """Root-modulus expanding test, with the depressed-cubic data attached."""
    J = core.jacobian(s, p)
    cubic = char_poly(J)
    M, N, W = char_coeffs_MNW(s, p)
    # cross-check the closed-form coefficients against the direct char poly
    scale = 1.0 + abs(M) + abs(N) + abs(W)
    if max(abs(cubic.c2 - M), abs(cubic.c1 - N), abs(cubic.c0 - W)) > 1.0e-9 * scale:
        raise ArithmeticError("characteristic coefficients disagree with the Jacobian")
    m = N - M * M / 3.0
    n = 2.0 * M**3 / 27.0 - M * N / 3.0 + W
    delta_bar = (n / 2.0) ** 2 + (m / 3.0) ** 3
    moduli = np.sort(solve_cubic(cubic).moduli())
    return ExpandingReport(
        s, (M, N, W), (m, n), delta_bar, moduli, bool(moduli[0] > 1.0 + tol)
    )


def expanding_oracle(report: ExpandingReport) -> bool | None:
    """Radical-inequality characterization (complex-pair case only).

    With one real eigenvalue t1 = Z1 - M/3 and a complex pair, expansion
    holds iff |t1| > 1 and the pair modulus exceeds 1, where the pair of the
    depressed cubic is -Z1/2 +- i*Im with Im^2 = (3/4) Z1^2 + m.  Returns
    None when delta_bar <= 0 (three real roots; the characterization does
    not apply).
    """
    M, _, _ = report.MNW
    m, n = report.depressed
    if report.delta_bar <= 0.0:
        return None
    u = -n / 2.0 + math.sqrt(report.delta_bar)
    v = -n / 2.0 - math.sqrt(report.delta_bar)
    z1 = math.copysign(abs(u) ** (1.0 / 3.0), u) + math.copysign(abs(v) ** (1.0 / 3.0), v)
    t1 = z1 - M / 3.0
    pair_sq = (z1 / 2.0 + M / 3.0) ** 2 + 0.75 * z1 * z1 + m
    d2 = t1 > 1.0 and pair_sq > 1.0
    d3 = t1 < -1.0 and pair_sq > 1.0
    return bool(d2 or d3)


def region_W(p: ParamPoint) -> RegionW:
    """Signed margins of the three inequalities defining the repelling region."""
    lam, mu, beta = p.lam, p.mu, p.beta
    m1 = beta - 9.0 / 4.0
    if beta > 2.0:
        upper = 2.0 * beta * beta - 2.0 * beta + 2.0 * math.sqrt(beta**4 - 2.0 * beta**3)
        m2 = min(mu - beta / (beta - 2.0), upper - mu)
    else:
        m2 = -math.inf
    denom = mu * beta - mu - beta
    m3 = lam - mu * beta / denom if denom > 0.0 else -math.inf
    margins = (m1, m2, m3)
    return RegionW(bool(all(v > 0.0 for v in margins)), margins)


# ---------------------------------------------------------------------------
# Expanding neighborhood.
# ---------------------------------------------------------------------------


def _box_expanding(p: ParamPoint, box: Box, grid_n: int, tol: float) -> bool:
    for v in box.sample_grid(grid_n):
        J = core.jacobian(State3.from_array(v), p)
        moduli = solve_cubic(char_poly(J)).moduli()
        if np.min(moduli) <= 1.0 + tol:
            return False
    return True


def expanding_box(p: ParamPoint, fp: State3, cfg: dict | None = None) -> Box:
    """Grow an axis-aligned expanding box around fp, one face at a time.

    Each of the six faces is pushed outward by doubling, then refined by
    bisection, validating candidate boxes on a dense grid (which includes
    the eight corners).  Lower bounds are clamped at zero.
    """
    cfg = cfg or {}
    grid_n = int(cfg.get("grid_n", 9))
    tol = float(cfg.get("tol", 0.0))
    h0 = float(cfg.get("initial_halfwidth", 1.0e-4))
    n_bisect = int(cfg.get("n_bisect", 20))
    if not expanding_at(fp, p, tol).expanding:
        raise NotExpandingAtCenter(f"Jacobian at {fp} is not expanding")
    c = fp.as_array()
    lo = np.maximum(c - h0, 0.0)
    hi = c + h0
    if not _box_expanding(p, Box(lo, hi), grid_n, tol):
        raise NotExpandingAtCenter("no expanding neighborhood at the seed half-width")
    # face order: (-x, +x, -y, +y, -z, +z)
    for face in range(6):
        axis, side = divmod(face, 2)

        def with_offset(d: float) -> Box:
            lo2, hi2 = lo.copy(), hi.copy()
            if side == 0:
                lo2[axis] = max(lo[axis] - d, 0.0)
            else:
                hi2[axis] = hi[axis] + d
            return Box(lo2, hi2)

        good, bad = 0.0, None
        d = h0
        while bad is None and d < 10.0:
            if _box_expanding(p, with_offset(d), grid_n, tol):
                good = d
                d *= 2.0
            else:
                bad = d
        if bad is not None:
            for _ in range(n_bisect):
                mid = 0.5 * (good + bad)
                if _box_expanding(p, with_offset(mid), grid_n, tol):
                    good = mid
                else:
                    bad = mid
        best = with_offset(good)
        lo, hi = best.lo, best.hi
    return Box(lo, hi)


# ---------------------------------------------------------------------------
# Snap-back preimage chains.
# ---------------------------------------------------------------------------


def plane_preimages(target_xy: tuple[float, float], p: ParamPoint) -> list[tuple[float, float]]:
    """In-plane preimages: solve F(x', y', 0) = (x'', y'', 0) in closed form.

    y' = y''/(beta x') turns the x-equation into the quadratic
    mu x'^2 - mu x' + (x'' + mu y''/beta) = 0.
    """
    x2, y2 = target_xy
    mu, beta = p.mu, p.beta
    c = x2 + mu * y2 / beta
    disc = mu * mu - 4.0 * mu * c
    if disc < 0.0:
        return []
    out = []
    for sgn in (+1.0, -1.0):
        xp = (mu + sgn * math.sqrt(disc)) / (2.0 * mu)
        if abs(xp) < 1.0e-14:
            continue
        out.append((xp, y2 / (beta * xp)))
    return out


def _chain_candidates(p: ParamPoint, target: State3, length: int) -> list[list[State3]]:
    """All closed-form preimage chains [E', ..., E^(length)] with F^length(E') = target."""
    chains = [[(target.x, target.y)]]
    for _ in range(length):
        nxt = []
        for chain in chains:
            for pre in plane_preimages(chain[0], p):
                nxt.append([pre] + chain)
        chains = nxt
    return [[State3(x, y, 0.0) for (x, y) in chain[:-1]] for chain in chains]


def _chain_det(p: ParamPoint, chain: list[State3]) -> float:
    det = 1.0
    for s in chain:
        det *= float(np.linalg.det(core.jacobian(s, p)))
    return det


def snapback_search(p: ParamPoint, fp: State3 | None = None, cfg: dict | None = None) -> SnapBackCertificate:
    """Certify a snap-back repeller at E2.

    Closed-form z=0 preimage chains of length M (default 2) are enumerated;
    a candidate is valid when its start E' lies in the expanding box, differs
    from E2, has forward residual below tolerance, and the chain Jacobian
    determinant is nonzero.  A full-3D Newton multistart over the box is the
    fallback when no closed-form chain qualifies.
    """
    cfg = cfg or {}
    length = int(cfg.get("chain_length", 2))
    resid_tol = float(cfg.get("residual_tol", 1.0e-10))
    det_tol = float(cfg.get("det_tol", 1.0e-12))
    allow_outside_box = bool(cfg.get("allow_outside_box", False))
    if fp is None:
        fp = get_fixed_point(p, "E2").coords
    box = expanding_box(p, fp, cfg.get("box_cfg"))
    target = fp
    stats = {"candidates": 0, "in_box": 0, "newton_seeds": 0, "outside_box": []}
    best = None
    best_outside = None
    for chain in _chain_candidates(p, target, length):
        stats["candidates"] += 1
        e_prime = chain[0]
        if np.max(np.abs(e_prime.as_array() - fp.as_array())) < 1.0e-8:
            continue
        cur = e_prime.as_array()
        for _ in range(length):
            cur = core.step_array(cur, p)
        resid = float(np.max(np.abs(cur - fp.as_array())))
        det = _chain_det(p, chain)
        if resid >= resid_tol or abs(det) <= det_tol:
            continue
        cand = (resid, tuple(e_prime.as_array()), chain, det)
        if box.contains(e_prime.as_array()):
            stats["in_box"] += 1
            if best is None or cand[:2] < best[:2]:
                best = cand
        else:
            stats["outside_box"].append(
                {"E_prime": tuple(e_prime.as_array()), "residual": resid, "det": det,
                 "pointwise_expanding": expanding_at(e_prime, p).expanding}
            )
            if best_outside is None or cand[:2] < best_outside[:2]:
                best_outside = cand
    if best is None:
        best = _newton_fallback(p, fp, box, length, resid_tol, det_tol, stats)
    if best is None:
        if allow_outside_box and best_outside is not None:
            resid, _, chain, det = best_outside
            return SnapBackCertificate(fp, box, chain, resid, det, False)
        raise NoSnapBackFound(
            f"no snap-back point inside the expanding box "
            f"[{box.lo.tolist()}, {box.hi.tolist()}]",
            stats,
        )
    resid, _, chain, det = best
    return SnapBackCertificate(fp, box, chain, resid, det, True)


def _newton_fallback(p, fp, box, length, resid_tol, det_tol, stats):
    from scipy.optimize import root as scipy_root

    tgt = fp.as_array()

    def fun(s):
        cur = s
        J = np.eye(3)
        for _ in range(length):
            J = core.jacobian(State3.from_array(cur), p) @ J
            cur = core.step_array(cur, p)
        return cur - tgt, J

    best = None
    for seed in box.sample_grid(5):
        stats["newton_seeds"] += 1
        res = scipy_root(fun, seed, jac=True, method="hybr", tol=1.0e-13)
        s = res.x
        if not np.all(np.isfinite(s)):
            continue
        if np.max(np.abs(s - tgt)) < 1.0e-8 or not box.contains(s):
            continue
        G, _ = fun(s)
        resid = float(np.max(np.abs(G)))
        if resid >= resid_tol:
            continue
        chain = [State3.from_array(s)]
        cur = s
        for _ in range(length - 1):
            cur = core.step_array(cur, p)
            chain.append(State3.from_array(cur))
        det = _chain_det(p, chain)
        if abs(det) <= det_tol:
            continue
        cand = (resid, tuple(s), chain, det)
        if best is None or cand[:2] < best[:2]:
            best = cand
    return best
