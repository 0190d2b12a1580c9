"""Strong 1:2, 1:3, 1:4 resonance analysis at E2.

Detection, normal-form constants (published expansions cross-checked by the
staged reduction pipelines in `reduction`), local bifurcation-curve
evaluation, and RK4 integration of the three approximating planar flows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ParamPoint
from .errors import NotExisting, OutOfRange
from . import reduction
from .fixed_points import get_fixed_point

SQRT3 = math.sqrt(3.0)

RESONANCE_POINTS = {
    "R12": (9.0, 2.25),
    "R13": (7.0, 7.0 / 3.0),
    "R14": (5.0, 2.5),
}


@dataclass
class ResonanceReport:
    kind: str  # "R12" | "R13" | "R14"
    critical: tuple[float, float]  # (mu*, beta*)
    eigenpair: tuple[complex, complex]
    constants: dict = field(default_factory=dict)
    transversality_det: float = 0.0


@dataclass
class PlanarTrajectory:
    system_id: str  # "Eq129" | "Eq1310" | "Eq1413"
    times: np.ndarray
    samples: np.ndarray  # shape (n, 2)
    dt: float
    diverged: bool = False


# ---------------------------------------------------------------------------
# Detection.
# ---------------------------------------------------------------------------


def _critical_eigenpair(kind: str) -> tuple[complex, complex]:
    if kind == "R12":
        return (-1.0 + 0.0j, -1.0 + 0.0j)
    if kind == "R13":
        return (complex(-0.5, SQRT3 / 2.0), complex(-0.5, -SQRT3 / 2.0))
    return (1.0j, -1.0j)


def detect_strong_resonance(p: ParamPoint, tol: float = 1.0e-6) -> ResonanceReport | None:
    """Identify a 1:2 / 1:3 / 1:4 point of E2 within `tol` in (mu, beta)."""
    rec = get_fixed_point(p, "E2")
    if not rec.exists:
        raise NotExisting("E2 does not exist at these parameters")
    for kind, (mu_c, beta_c) in RESONANCE_POINTS.items():
        if abs(p.mu - mu_c) <= tol and abs(p.beta - beta_c) <= tol:
            pc = ParamPoint(p.lam, mu_c, beta_c)
            t1, t2 = _verified_pair(pc, kind)
            return ResonanceReport(
                kind,
                (mu_c, beta_c),
                (t1, t2),
                constants_for(kind),
                transversality_det(kind),
            )
    return None


def _verified_pair(pc: ParamPoint, kind: str) -> tuple[complex, complex]:
    """Check the in-plane pair against the exact root of unity.

    Verified through the elementary symmetric functions (trace and
    determinant) rather than raw eigenvalues: a defective double eigenvalue
    (1:2) perturbs raw eigenvalues by O(sqrt(eps)).
    """
    A2 = reduction.e2_plane_linear(pc)
    tr = A2[0, 0] + A2[1, 1]
    det = A2[0, 0] * A2[1, 1] - A2[0, 1] * A2[1, 0]
    t1, t2 = _critical_eigenpair(kind)
    if abs(t1 + t2 - tr) > 1.0e-10 or abs(t1 * t2 - det) > 1.0e-10:
        raise ArithmeticError(f"{kind} eigenpair check failed: tr={tr}, det={det}")
    return (t1, t2)


def constants_for(kind: str) -> dict:
    if kind == "R12":
        return r12_constants(0.0, 0.0)
    if kind == "R13":
        return r13_constants((0.0, 0.0))
    return r14_constants((0.0, 0.0))


def transversality_det(kind: str) -> float:
    """Determinant of the unfolding-parameter map at the resonance point."""
    if kind == "R12":
        J = reduction.numeric_jacobian_2d(lambda a1, a2: reduction.r12_eps_of_alpha(a1, a2))
        return float(np.linalg.det(J))
    if kind == "R13":
        return float(np.linalg.det(reduction.R13_BETA_JACOBIAN))
    J = reduction.numeric_jacobian_2d(
        lambda e1, e2: (
            reduction.r14_omega_of_eps(e1, e2).real,
            reduction.r14_omega_of_eps(e1, e2).imag,
        )
    )
    return float(np.linalg.det(J))


# ---------------------------------------------------------------------------
# Published constants with leading-order parameter dependence.
# ---------------------------------------------------------------------------


def r12_constants(eps1: float, eps2: float) -> dict:
    """1:2 normal-form constants to first order in the unfolding (eps1, eps2)."""
    C = 243.0 / 4.0 + 243.0 / 8.0 * eps2 + 27.0 / 4.0 * eps1
    D = 2187.0 / 4.0 - 1539.0 / 8.0 * eps2 - 243.0 / 4.0 * eps1
    C1 = 243.0 + 243.0 / 2.0 * eps2 + 27.0 * eps1
    D1 = -1458.0 + 405.0 / 2.0 * eps2 + 81.0 * eps1
    return {
        "C": C,
        "D": D,
        "C1": C1,
        "D1": D1,
        "delta1": 144.0 * eps1,
        "delta2": -12.0 * eps1 - 12.0 * eps2,
        "nondegenerate": (C != 0.0) and (D + 3.0 * C != 0.0),
        "D0_plus_3C0": 2187.0 / 4.0 + 3.0 * 243.0 / 4.0,
    }


def r13_constants(eps_hat: tuple[float, float] = (0.0, 0.0)) -> dict:
    """1:3 constants: critical values plus the linearized unfolding map."""
    pipe = reduction.r13_pipeline()
    b1_0 = complex(21.0 / 4.0, 7.0 * SQRT3 / 2.0)
    beta1, beta2 = reduction.r13_beta_map(eps_hat[0], eps_hat[1])
    return {
        "b1": b1_0,
        "c1": pipe["c1"],
        "Rc": pipe["Rc"],
        "Ic": pipe["Ic"],
        "beta1": beta1,
        "beta2": beta2,
        "b1_pipeline": pipe["b1"],
        "c1_pipeline": pipe["c1"],
    }


def r14_constants(eps_tilde: tuple[float, float] = (0.0, 0.0)) -> dict:
    """1:4 constants: A0 = a0 + i b0 and the region of the (a0, b0)-plane.

    Only region I (|A0| < 1 with a0 < 0, b0 < 0) is distinguished; the
    published analysis places A0 there and reads the bifurcation set off the
    standard 1:4 diagrams.
    """
    pipe = reduction.r14_pipeline()
    a0 = float(np.real(np.conj(pipe["A0"])))
    b0 = float(np.imag(np.conj(pipe["A0"])))
    if abs(pipe["A0"]) < 1.0 and a0 < 0.0 and b0 < 0.0:
        region = "I"
    else:
        region = "unclassified"
    omega = reduction.r14_omega_of_eps(eps_tilde[0], eps_tilde[1])
    return {
        "a0": a0,
        "b0": b0,
        "A0": pipe["A0"],
        "region": region,
        "omega1": omega.real,
        "omega2": omega.imag,
        "c1": pipe["c1"],
        "d1": pipe["d1"],
    }


# ---------------------------------------------------------------------------
# Local bifurcation curves through the resonance points (leading order).
# ---------------------------------------------------------------------------

CURVES = {
    # curve_id: (kind, mu(beta), validity predicate)
    "L2p": ("R12", lambda b: 3.0 * b / (3.0 - b), lambda b: 1.5 < b < 3.0),
    "L3p": ("R12", lambda b: b / (b - 2.0), lambda b: b > 2.0),
    "L3pp": ("R12", lambda b: b / (b - 2.0), lambda b: b > 2.0),
    "L3bar": ("R13", lambda b: b / (b - 2.0), lambda b: b > 2.0),
    "H2r": ("R12", lambda b: -41.0 * b / (7.0 * b - 26.0), lambda b: b < 26.0 / 7.0),
    "H3r": (
        "R13",
        lambda b: -9.0 * b / 4.0 + 1001.0 / 80.0 - 21.0 * math.sqrt(120.0 * b - 279.0) / 80.0,
        lambda b: b >= 279.0 / 120.0,
    ),
}


def bifurcation_curve(kind: str, curve_id: str, beta: float) -> float:
    """Leading-order mu(beta) of the named local bifurcation curve."""
    if curve_id not in CURVES:
        raise KeyError(curve_id)
    ckind, f, valid = CURVES[curve_id]
    if kind not in ("", ckind):
        raise KeyError(f"curve {curve_id} belongs to {ckind}, not {kind}")
    if not valid(beta):
        raise OutOfRange(f"beta={beta} outside the validity range of {curve_id}")
    return float(f(beta))


# ---------------------------------------------------------------------------
# Approximating planar flows (fixed-step RK4).
# ---------------------------------------------------------------------------


def _rhs(system_id: str, params: dict):
    if system_id == "Eq129":
        d1 = float(params.get("delta1", 0.0))
        d2 = float(params.get("delta2", 0.0))

        def f(u):
            z, e = u
            return np.array([e, d1 * z + d2 * e + z**3 - z**2 * e])

        return f
    if system_id == "Eq1310":
        b1 = float(params.get("beta1", 0.0))
        b2 = float(params.get("beta2", 0.0))
        Rc = float(params.get("Rc", r13_constants()["Rc"]))
        Ic = float(params.get("Ic", r13_constants()["Ic"]))

        def f(u):
            rho, iota = u
            return np.array(
                [
                    b1 * rho + rho**2 * math.cos(3.0 * iota) + Rc * rho**3,
                    b2 - rho * math.sin(3.0 * iota) + Ic * rho**2,
                ]
            )

        return f
    if system_id == "Eq1413":
        w1 = float(params.get("omega1", 0.0))
        w2 = float(params.get("omega2", 0.0))
        cst = r14_constants()
        a0 = float(params.get("a0", cst["a0"]))
        b0 = float(params.get("b0", cst["b0"]))

        def f(u):
            rho, nu = u
            return np.array(
                [
                    w1 * rho + a0 * rho**3 + rho**3 * math.cos(4.0 * nu),
                    w2 + b0 * rho**2 + rho**2 * math.sin(4.0 * nu),
                ]
            )

        return f
    raise KeyError(system_id)


def integrate_normal_form(
    system_id: str,
    params: dict,
    init: tuple[float, float],
    t_end: float,
    dt: float = 1.0e-3,
) -> PlanarTrajectory:
    """Fixed-step RK4 trajectory of one of the three approximating flows."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    f = _rhs(system_id, params)
    n = max(1, int(round(t_end / dt)))
    out = np.empty((n + 1, 2))
    u = np.array(init, dtype=float)
    out[0] = u
    diverged = False
    for i in range(1, n + 1):
        k1 = f(u)
        k2 = f(u + 0.5 * dt * k1)
        k3 = f(u + 0.5 * dt * k2)
        k4 = f(u + dt * k3)
        u = u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i] = u
        if not np.all(np.isfinite(u)) or np.max(np.abs(u)) > 1.0e6:
            out = out[: i + 1]
            diverged = True
            break
    times = dt * np.arange(out.shape[0])
    return PlanarTrajectory(system_id, times, out, dt, diverged)


def eq1310_equilibrium_radius(beta1: float, beta2: float) -> float:
    """Leading-order radius of the nontrivial equilibria of the 1:3 flow."""
    return math.sqrt(beta1 * beta1 + beta2 * beta2)
