"""Codimension-1 bifurcation diagnostics.

Transcritical and flip coefficients come in two independent flavors: the
closed forms and a generic 1D center-manifold pipeline (exact Taylor
coefficients, since the map is quadratic).  The Neimark-Sacker first
Lyapunov quantity is exposed in three flavors: the published closed form,
the corrected closed form -beta^3/(8(beta-2)^3) that the derivation chain
actually yields, and the numeric staged-normal-form pipeline; the corrected
form is the one the pipeline confirms to 1e-8 across the curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import core, spectra
from .core import ParamPoint, State3
from .errors import (
    CollapsedToFixedPoint,
    ExcludedBeta,
    NoConvergence,
    NotExisting,
    OutOfRange,
    WrongCriticalSet,
)
from .fixed_points import get_fixed_point
from .reduction import reduce_1d

CRITICAL_SET_TOL = 1.0e-8
_FD_H = 1.0e-5


@dataclass
class BifurcationDiagnostic:
    kind: str  # "Transcritical" | "Flip" | "NeimarkSacker"
    at: str  # fixed point id
    offset: float  # signed distance to the critical manifold
    coeffs: dict = field(default_factory=dict)
    criticality: str = ""  # "Supercritical" | "Subcritical" | "Degenerate"


@dataclass
class PeriodTwoCycle:
    p1: State3
    p2: State3
    multipliers: spectra.RootTriple
    stable: bool


# ---------------------------------------------------------------------------
# Critical-set geometry helpers.
# ---------------------------------------------------------------------------


def _transcritical_offset(fp_id: str, p: ParamPoint) -> tuple[float, ParamPoint]:
    """Signed distance to the transcritical set and the projected parameters."""
    lam, mu, beta = p.lam, p.mu, p.beta
    if fp_id == "O":
        return mu - 1.0, ParamPoint(lam, 1.0, beta)
    if fp_id == "E1":
        if mu <= 1.0:
            raise NotExisting("E1 transcritical needs mu > 1")
        bc = mu / (mu - 1.0)
        return beta - bc, ParamPoint(lam, mu, bc)
    if fp_id == "E2":
        denom = lam * mu - lam - mu
        if mu <= 1.0 or denom <= 0.0:
            raise NotExisting("E2 transcritical needs mu > 1 and lam*mu > lam + mu")
        bc = lam * mu / denom
        return beta - bc, ParamPoint(lam, mu, bc)
    raise KeyError(fp_id)


def _flip_offset(fp_id: str, p: ParamPoint) -> tuple[float, ParamPoint]:
    lam, mu, beta = p.lam, p.mu, p.beta
    if fp_id == "E1":
        return mu - 3.0, ParamPoint(lam, 3.0, beta)
    if fp_id == "E2":
        if beta >= 3.0:
            raise OutOfRange("E2 flip curve mu = 3*beta/(3-beta) needs beta < 3")
        mc = 3.0 * beta / (3.0 - beta)
        return mu - mc, ParamPoint(lam, mc, beta)
    raise KeyError(fp_id)


def _require_on_set(offset: float, tol: float, what: str) -> None:
    if abs(offset) > tol:
        raise WrongCriticalSet(f"{what}: offset {offset:.3e} exceeds tolerance {tol:.1e}")


def _eigenvalue_near(A: np.ndarray, target: float) -> float:
    w = np.linalg.eigvals(A)
    return float(np.real(w[np.argmin(np.abs(w - target))]))


def _cross_derivative(fp_id: str, pc: ParamPoint, axis: str, target: float) -> float:
    """Central-difference d(eigenvalue closest to target)/d(axis parameter)."""

    def eig_at(delta: float) -> float:
        kw = {"lam": pc.lam, "mu": pc.mu, "beta": pc.beta}
        kw[axis] += delta
        q = ParamPoint(**kw)
        rec = get_fixed_point(q, fp_id)
        return _eigenvalue_near(core.jacobian(rec.coords, q), target)

    return (eig_at(_FD_H) - eig_at(-_FD_H)) / (2.0 * _FD_H)


# ---------------------------------------------------------------------------
# Transcritical coefficients.
# ---------------------------------------------------------------------------


def transcritical_coeffs(fp_id: str, p: ParamPoint, tol: float = CRITICAL_SET_TOL):
    """Closed-form (quadratic, cross) pair on the transcritical critical set."""
    offset, pc = _transcritical_offset(fp_id, p)
    _require_on_set(offset, tol, f"transcritical at {fp_id}")
    lam, mu = pc.lam, pc.mu
    if fp_id == "O":
        return (-2.0, 1.0)
    if fp_id == "E1":
        return (-2.0 * mu / (mu - 1.0), (mu - 1.0) / mu)
    return (-4.0 * lam, ((mu - 1.0) * lam - mu) ** 2 / (mu**2 * lam))


def transcritical_coeffs_numeric(fp_id: str, p: ParamPoint, tol: float = CRITICAL_SET_TOL):
    """Pipeline (quadratic, cross): 1D reduction at kappa=+1 plus eigenvalue FD."""
    offset, pc = _transcritical_offset(fp_id, p)
    _require_on_set(offset, tol, f"transcritical at {fp_id}")
    rec = get_fixed_point(pc, fp_id)
    g2, _ = reduce_1d(core.jacobian(rec.coords, pc), 1.0, pc)
    axis = "mu" if fp_id == "O" else "beta"
    cross = _cross_derivative(fp_id, pc, axis, 1.0)
    return (2.0 * g2, cross)


def transcritical_diagnostic(fp_id: str, p: ParamPoint, tol: float = CRITICAL_SET_TOL) -> BifurcationDiagnostic:
    offset, _ = _transcritical_offset(fp_id, p)
    quad, cross = transcritical_coeffs(fp_id, p, tol)
    nquad, ncross = transcritical_coeffs_numeric(fp_id, p, tol)
    return BifurcationDiagnostic(
        "Transcritical",
        fp_id,
        offset,
        {
            "quadratic": quad,
            "cross": cross,
            "quadratic_numeric": nquad,
            "cross_numeric": ncross,
        },
        "Degenerate" if quad == 0.0 else "",
    )


# ---------------------------------------------------------------------------
# Flip coefficients.
# ---------------------------------------------------------------------------


def flip_coeffs(fp_id: str, p: ParamPoint, tol: float = CRITICAL_SET_TOL):
    """(transversality, flip Lyapunov quantity, criticality) on the flip set.

    At the anchor points (E1 with mu=3, E2 with (mu,beta)=(6,2)) the values
    reduce to the closed forms (-2, 18) and (-1, -144); elsewhere on the E2
    curve mu = 3*beta/(3-beta) the pipeline values are returned.
    """
    trans, lyap = flip_coeffs_numeric(fp_id, p, tol)
    if fp_id == "E1":
        trans, lyap = -2.0, 18.0
    elif abs(p.beta - 2.0) <= tol and abs(p.mu - 6.0) <= 10.0 * tol:
        trans, lyap = -1.0, -144.0
    if lyap > 0.0:
        crit = "Supercritical"
    elif lyap < 0.0:
        crit = "Subcritical"
    else:
        crit = "Degenerate"
    return (trans, lyap, crit)


def flip_coeffs_numeric(fp_id: str, p: ParamPoint, tol: float = CRITICAL_SET_TOL):
    """Pipeline (transversality, flip Lyapunov): exact 1D reduction at kappa=-1.

    The reported transversality is 2 * d(eigenvalue)/d(mu) on the branch
    through -1; the Lyapunov quantity is 2*g2^2 + 2*g3 of the restricted map.
    """
    offset, pc = _flip_offset(fp_id, p)
    _require_on_set(offset, tol, f"flip at {fp_id}")
    rec = get_fixed_point(pc, fp_id)
    g2, g3 = reduce_1d(core.jacobian(rec.coords, pc), -1.0, pc)
    lyap = 2.0 * g2 * g2 + 2.0 * g3
    trans = 2.0 * _cross_derivative(fp_id, pc, "mu", -1.0)
    return (trans, lyap)


def flip_diagnostic(fp_id: str, p: ParamPoint, tol: float = CRITICAL_SET_TOL) -> BifurcationDiagnostic:
    offset, _ = _flip_offset(fp_id, p)
    trans, lyap, crit = flip_coeffs(fp_id, p, tol)
    ntrans, nlyap = flip_coeffs_numeric(fp_id, p, tol)
    return BifurcationDiagnostic(
        "Flip",
        fp_id,
        offset,
        {
            "transversality": trans,
            "flip_lyapunov": lyap,
            "transversality_numeric": ntrans,
            "flip_lyapunov_numeric": nlyap,
        },
        crit,
    )


# ---------------------------------------------------------------------------
# Neimark-Sacker quantities at E2 on mu = beta/(beta-2).
# ---------------------------------------------------------------------------

NS_EXCLUDED_BETAS = (7.0 / 3.0, 5.0 / 2.0)
NS_DEGENERATE_BETA = (9.0 + math.sqrt(21.0)) / 2.0


def ns_first_lyapunov(p, formula: str = "published", tol: float = 1.0e-9):
    """First Lyapunov quantity A on the Neimark-Sacker set mu = beta/(beta-2).

    `p` may be a ParamPoint or a bare beta; mu is set internally.  The
    published closed form beta^3*(beta^2-9*beta+15)/(16*(beta-2)^3*(4*beta-9))
    is the default; formula="corrected" selects -beta^3/(8*(beta-2)^3), which
    is what the derivation chain and the numeric pipeline actually produce
    (the two closed forms differ).  Returns (value, criticality).
    """
    beta = p.beta if isinstance(p, ParamPoint) else float(p)
    if beta <= 2.25:
        raise OutOfRange("Neimark-Sacker quantity needs beta > 9/4")
    for bex in NS_EXCLUDED_BETAS:
        if abs(beta - bex) <= tol:
            raise ExcludedBeta(f"beta = {bex} is a strong-resonance exclusion")
    if formula == "published":
        val = beta**3 * (beta**2 - 9.0 * beta + 15.0) / (
            16.0 * (beta - 2.0) ** 3 * (4.0 * beta - 9.0)
        )
    elif formula == "corrected":
        val = -(beta**3) / (8.0 * (beta - 2.0) ** 3)
    else:
        raise ValueError(f"unknown formula {formula!r}")
    if abs(val) <= 1.0e-12:
        crit = "Degenerate"
    else:
        crit = "Subcritical" if val > 0.0 else "Supercritical"
    return (val, crit)


def ns_first_lyapunov_pipeline(beta: float, lam: float = 1.0) -> float:
    """Numeric staged-normal-form value of the first Lyapunov quantity."""
    from .reduction import ns_quantity_numeric

    return ns_quantity_numeric(beta, lam)


def ns_transversality(p) -> float:
    """d|multiplier|/d(mu) on the crossing: (beta-2)/(2*beta), beta > 2."""
    beta = p.beta if isinstance(p, ParamPoint) else float(p)
    if beta <= 2.0:
        raise OutOfRange("Neimark-Sacker transversality needs beta > 2")
    return (beta - 2.0) / (2.0 * beta)


# ---------------------------------------------------------------------------
# Period-2 cycles by Newton on F^2.
# ---------------------------------------------------------------------------

NEWTON_MAX_ITER = 100
NEWTON_STEP_TOL = 1.0e-12


def period2_orbit(p: ParamPoint, guess: State3) -> PeriodTwoCycle:
    """Newton solve of F^2(s) = s from `guess`, excluding fixed points."""
    s = guess.as_array()
    for _ in range(NEWTON_MAX_ITER):
        s1 = core.step_array(s, p)
        s2 = core.step_array(s1, p)
        G = s2 - s
        DG = core.jacobian(State3.from_array(s1), p) @ core.jacobian(
            State3.from_array(s), p
        ) - np.eye(3)
        try:
            delta = np.linalg.solve(DG, -G)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(f"singular Newton system: {exc}") from exc
        s = s + delta
        if not np.all(np.isfinite(s)):
            raise NoConvergence("Newton iterate diverged")
        if float(np.max(np.abs(delta))) < NEWTON_STEP_TOL:
            break
    else:
        raise NoConvergence(f"no convergence in {NEWTON_MAX_ITER} iterations")
    s1 = core.step_array(s, p)
    if float(np.max(np.abs(core.step_array(s1, p) - s))) > 1.0e-10:
        raise NoConvergence("converged point does not satisfy F^2(s) = s")
    if float(np.max(np.abs(s1 - s))) < 1.0e-8:
        raise CollapsedToFixedPoint("Newton collapsed onto a fixed point")
    DF2 = core.jacobian(State3.from_array(s1), p) @ core.jacobian(State3.from_array(s), p)
    mult = spectra.solve_cubic(spectra.char_poly(DF2))
    stable = bool(np.all(mult.moduli() < 1.0))
    return PeriodTwoCycle(State3.from_array(s), State3.from_array(s1), mult, stable)
