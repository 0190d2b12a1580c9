"""Center-manifold and planar normal-form reduction pipelines.

The map is globally quadratic, so every Taylor coefficient used here is
exact: the 1D reductions (transcritical/flip) come from a two-term
homological solve, and the planar (complex or Jordan) reductions run the
staged near-identity machinery of `series` on the exactly-quadratic
restricted map at E2.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from . import core
from .core import ParamPoint
from .series import Poly2, homological_stage_real, real_conjugate_change, remove_degree_complex

# ---------------------------------------------------------------------------
# 1D center-manifold reduction at a fixed point with a real critical
# eigenvalue kappa (+1 or -1).
# ---------------------------------------------------------------------------


def _right_left_pair(A: np.ndarray, kappa: float) -> tuple[np.ndarray, np.ndarray]:
    """Right/left eigenvectors for the eigenvalue closest to kappa.

    The right eigenvector is normalized so its last nonzero component is 1;
    the left one so p.q = 1.
    """
    w, V = np.linalg.eig(A)
    idx = int(np.argmin(np.abs(w - kappa)))
    q = np.real_if_close(V[:, idx]).astype(float)
    nz = np.nonzero(np.abs(q) > 1.0e-10)[0]
    q = q / q[nz[-1]]
    wl, U = np.linalg.eig(A.T)
    jdx = int(np.argmin(np.abs(wl - kappa)))
    p = np.real_if_close(U[:, jdx]).astype(float)
    p = p / float(p @ q)
    return q, p


def reduce_1d(A: np.ndarray, kappa: float, p_par: ParamPoint) -> tuple[float, float]:
    """Quadratic and cubic Taylor coefficients (g2, g3) of the 1D restriction.

    The restricted map is u -> kappa*u + g2*u^2 + g3*u^3 + O(u^4); exactness
    follows from the map being quadratic.
    """
    q, pv = _right_left_pair(A, kappa)
    Qq = core.quadratic_part(q, p_par)
    g2 = float(pv @ Qq)
    rhs = g2 * q - Qq
    B = A - kappa * kappa * np.eye(3)
    if abs(np.linalg.det(B)) > 1.0e-10:
        h2 = np.linalg.solve(B, rhs)
    else:
        # kappa^2 is an eigenvalue (e.g. transcritical, kappa = 1): bordered
        # solve picking the solution with p.h2 = 0.
        M = np.zeros((4, 4))
        M[:3, :3] = B
        M[:3, 3] = q
        M[3, :3] = pv
        sol = np.linalg.solve(M, np.concatenate([rhs, [0.0]]))
        h2 = sol[:3]
    Bqh = core.bilinear_part(q, h2, p_par)
    g3 = float(2.0 * (pv @ Bqh) - 2.0 * kappa * g2 * (pv @ h2))
    return g2, g3


# ---------------------------------------------------------------------------
# Exact planar restriction at E2 (the invariant plane z = 0).
# ---------------------------------------------------------------------------


def e2_plane_linear(p: ParamPoint) -> np.ndarray:
    """Linear part of the in-plane map at E2."""
    mu, beta = p.mu, p.beta
    xs = 1.0 / beta
    ys = 1.0 - 1.0 / mu - 1.0 / beta
    return np.array(
        [
            [mu * (1.0 - 2.0 * xs - ys), -mu * xs],
            [beta * ys, beta * xs],
        ]
    )


def plane_quad(u, v, p: ParamPoint):
    """Quadratic part of the in-plane map: exact and point-independent."""
    return (-p.mu * u * (u + v), p.beta * u * v)


def plane_bilinear(a, b, p: ParamPoint):
    """Symmetric bilinear form of the in-plane quadratic part."""
    return (
        -p.mu * 0.5 * (a[0] * (b[0] + b[1]) + b[0] * (a[0] + a[1])),
        p.beta * 0.5 * (a[0] * b[1] + b[0] * a[1]),
    )


def e2_complex_chart(p: ParamPoint, branch: int = +1):
    """Complex eigen-chart at E2 for a complex in-plane pair.

    Returns (t1, q, pvec): A2 q = t1 q with the normalization q[1] = 1/2,
    and the left functional pvec with pvec.q = 1, pvec.qbar = 0 so that
    w = z q + zbar qbar  <=>  z = pvec.w.
    `branch` selects the sign of Im t1.
    """
    A2 = e2_plane_linear(p)
    tr = A2[0, 0] + A2[1, 1]
    det = A2[0, 0] * A2[1, 1] - A2[0, 1] * A2[1, 0]
    disc = tr * tr - 4.0 * det
    if disc >= 0:
        raise ValueError("in-plane eigenvalues are real; no complex chart")
    t1 = complex(tr / 2.0, branch * math.sqrt(-disc) / 2.0)
    q2 = 0.5
    q1 = (t1 - A2[1, 1]) * q2 / A2[1, 0]
    q = np.array([q1, q2], dtype=complex)
    # Left functional: pvec orthogonal to qbar with pvec.q = 1.
    # pvec = c * (qbar[1], -qbar[0]) rotated: choose pvec s.t. pvec.qbar = 0.
    qb = np.conj(q)
    raw = np.array([qb[1], -qb[0]], dtype=complex)  # raw.qbar = 0
    pvec = raw / (raw @ q)
    return t1, q, pvec


def e2_complex_map_series(p: ParamPoint, trunc: int = 3, branch: int = +1):
    """The in-plane E2 map as an exact complex series z' = t1 z + sum f_jk z^j zbar^k."""
    t1, q, pvec = e2_complex_chart(p, branch)
    qb = np.conj(q)
    f20 = pvec @ np.array(plane_quad(q[0], q[1], p))
    f11 = 2.0 * (pvec @ np.array(plane_bilinear(q, qb, p)))
    f02 = pvec @ np.array(plane_quad(qb[0], qb[1], p))
    M = Poly2({(1, 0): t1, (2, 0): f20, (1, 1): f11, (0, 2): f02}, trunc)
    return t1, M


def staged_complex_normal_form(p: ParamPoint, resonances: dict[int, set], trunc: int, branch: int = +1):
    """Run the staged removal degree by degree, keeping the given resonant sets.

    resonances maps degree -> set of (j, k) kept at that degree.  Returns
    (t1, final series).
    """
    t1, M = e2_complex_map_series(p, trunc=trunc, branch=branch)
    for degree in range(2, trunc + 1):
        keep = resonances.get(degree, set())
        M = remove_degree_complex(M, t1, degree, keep)
    return t1, M


# ---------------------------------------------------------------------------
# Neimark-Sacker first Lyapunov quantity via the staged pipeline.
# ---------------------------------------------------------------------------


def ns_quantity_numeric(beta: float, lam: float = 1.0) -> float:
    """Re(conj(t1) * f21) after removing all quadratic terms, on mu = beta/(beta-2)."""
    mu = beta / (beta - 2.0)
    p = ParamPoint(lam, mu, beta)
    t1, M = staged_complex_normal_form(p, {2: set(), 3: {(2, 1)}}, trunc=3)
    f21 = M.get(2, 1)
    return float(np.real(np.conj(t1) * f21))


# ---------------------------------------------------------------------------
# Strong resonance pipelines.
# ---------------------------------------------------------------------------

R12_POINT = (9.0, 2.25)
R13_POINT = (7.0, 7.0 / 3.0)
R14_POINT = (5.0, 2.5)


def r12_map_series(p: ParamPoint, trunc: int = 3):
    """The in-plane E2 map in the Jordan chart (xi, eta) at/near the 1:2 point.

    Basis: q0 = (-2, 1) (eigenvector), q1 = (1, 0) (generalized): at the
    critical point A2 q0 = -q0, A2 q1 = q0 - q1.
    """
    A2 = e2_plane_linear(p)
    T = np.array([[-2.0, 1.0], [1.0, 0.0]])
    Tinv = np.linalg.inv(T)
    AJ = Tinv @ A2 @ T
    xi = Poly2.var(0, trunc)
    eta = Poly2.var(1, trunc)
    # w = T (xi, eta) in plane coordinates.
    w0 = xi.scale(T[0, 0]) + eta.scale(T[0, 1])
    w1 = xi.scale(T[1, 0]) + eta.scale(T[1, 1])
    qx, qy = plane_quad_poly(w0, w1, p)
    m0 = xi.scale(AJ[0, 0]) + eta.scale(AJ[0, 1]) + qx.scale(Tinv[0, 0]) + qy.scale(Tinv[0, 1])
    m1 = xi.scale(AJ[1, 0]) + eta.scale(AJ[1, 1]) + qx.scale(Tinv[1, 0]) + qy.scale(Tinv[1, 1])
    return (m0, m1), AJ


def plane_quad_poly(w0: Poly2, w1: Poly2, p: ParamPoint) -> tuple[Poly2, Poly2]:
    """Quadratic part of the in-plane map applied to polynomial arguments."""
    qx = (w0 * (w0 + w1)).scale(-p.mu)
    qy = (w0 * w1).scale(p.beta)
    return qx, qy


def r12_cd_constants(lam: float = 1.0) -> tuple[float, float]:
    """C(0), D(0) of the 1:2 normal form eta' term: C xi^3 + D xi^2 eta."""
    p = ParamPoint(lam, *R12_POINT)
    M, AJ = r12_map_series(p, trunc=3)
    A = np.array([[-1.0, 1.0], [0.0, -1.0]])
    if not np.allclose(AJ, A, atol=1.0e-12):
        raise ArithmeticError("Jordan chart is off at the 1:2 point")
    M, _ = homological_stage_real(M, A, 2, [])
    M, kept = homological_stage_real(
        M, A, 3, [(1, (3, 0)), (1, (2, 1))]
    )
    return float(kept[(1, (3, 0))]), float(kept[(1, (2, 1))])


def r12_quadratic_chart_coeffs(lam: float = 1.0) -> dict:
    """Raw quadratic coefficients of the Jordan-chart map at the 1:2 point."""
    p = ParamPoint(lam, *R12_POINT)
    (m0, m1), _ = r12_map_series(p, trunc=2)
    return {
        "g20": m0.get(2, 0),
        "g11": m0.get(1, 1),
        "g02": m0.get(0, 2),
        "h20": m1.get(2, 0),
        "h11": m1.get(1, 1),
        "h02": m1.get(0, 2),
    }


def r12_eps_of_alpha(a1: float, a2: float, lam: float = 1.0) -> tuple[float, float]:
    """Unfolding parameters (eps1, eps2) from (mu, beta) = (9 + a1, 9/4 + a2).

    Chain: Jordan chart T, then the secondary shear S built from the
    perturbed linear part, after which the linear part reads
    [[-1, 1], [eps1, -1 + eps2]].
    """
    p = ParamPoint(lam, 9.0 + a1, 2.25 + a2)
    A2 = e2_plane_linear(p)
    T = np.array([[-2.0, 1.0], [1.0, 0.0]])
    M = np.linalg.inv(T) @ A2 @ T
    a10 = M[0, 0] + 1.0
    a01 = M[0, 1] - 1.0
    S = np.array([[1.0 + a01, 0.0], [-a10, 1.0]])
    M2 = np.linalg.inv(S) @ M @ S
    return float(M2[1, 0]), float(M2[1, 1] + 1.0)


def numeric_jacobian_2d(f, h: float = 1.0e-6) -> np.ndarray:
    """Central-difference Jacobian of a R^2 -> R^2 function at 0."""
    J = np.zeros((2, 2))
    for j in range(2):
        dp = [0.0, 0.0]
        dp[j] = h
        fp = np.array(f(dp[0], dp[1]))
        fm = np.array(f(-dp[0], -dp[1]))
        J[:, j] = (fp - fm) / (2.0 * h)
    return J


def r13_pipeline(lam: float = 1.0) -> dict:
    """1:3 constants from the quadratic chart at (mu, beta) = (7, 7/3).

    The cubic coefficient of the approximating flow is assembled from the
    raw quadratic coefficients in the factorial convention
    (g20 = 2 t20, g11 = t11, g02 = 2 t02, g21 = 0):
      B  = g02 / 4,
      A  = g20 g11 (2 zeta + conj(zeta) - 3)
             / (4 (conj(zeta) - 1)(zeta^2 - zeta))
           + |g11|^2 / (1 - conj(zeta)),
      b1 = 3 conj(zeta) B,      c1 = -3 |B|^2 + 3 zeta^2 A.
    The staged resonant cubic coefficient f21 is returned as a cross-check:
    A = -conj(f21) at the critical point.
    """
    p = ParamPoint(lam, *R13_POINT)
    t1, M2 = e2_complex_map_series(p, trunc=2, branch=+1)
    t20, t11, t02 = M2.get(2, 0), M2.get(1, 1), M2.get(0, 2)
    g20, g11, g02 = 2.0 * t20, t11, 2.0 * t02
    B = g02 / 4.0
    A = g20 * g11 * (2.0 * t1 + np.conj(t1) - 3.0) / (
        4.0 * (np.conj(t1) - 1.0) * (t1**2 - t1)
    ) + abs(g11) ** 2 / (1.0 - np.conj(t1))
    b1 = 3.0 * np.conj(t1) * B
    c1 = -3.0 * abs(B) ** 2 + 3.0 * t1**2 * A
    _, M3 = staged_complex_normal_form(
        p, {2: {(0, 2)}, 3: {(2, 1)}}, trunc=3, branch=+1
    )
    f21 = M3.get(2, 1)
    absb1sq = abs(b1) ** 2
    return {
        "t1": t1,
        "B": B,
        "A": A,
        "b1": b1,
        "c1": c1,
        "f21": f21,
        "Rc": float(np.real(c1) / absb1sq),
        "Ic": float(np.imag(c1) / absb1sq),
    }


def r13_rho_of_eps(e1: float, e2: float, lam: float = 1.0) -> complex:
    """Log-multiplier unfolding diagnostic: 3*(log zeta(eps) - 2*pi*i/3).

    Its real part vanishes exactly along the torus-birth curve
    mu = beta/(beta-2), the same kernel line as the published linear map in
    r13_beta_map, but the two transversal components differ; the published
    map is the one the normal-form constants refer to.
    """
    p = ParamPoint(lam, 7.0 + e1, 7.0 / 3.0 + e2)
    A2 = e2_plane_linear(p)
    w = np.linalg.eigvals(A2)
    zeta = w[np.argmax(w.imag)]
    return 3.0 * (cmath.log(zeta) - 2.0j * math.pi / 3.0)


R13_BETA_JACOBIAN = np.array(
    [
        [3.0 / 7.0, 54.0 / 7.0],
        [2.0 * math.sqrt(3.0) / 7.0, -27.0 * math.sqrt(3.0) / 7.0],
    ]
)


def r13_beta_map(e1: float, e2: float) -> tuple[float, float]:
    """Linearized unfolding parameters (beta1, beta2) at the 1:3 point.

    beta1 = 3 e1/7 + 54 e2/7, beta2 = 2 sqrt(3) e1/7 - 27 sqrt(3) e2/7;
    Jacobian determinant -27 sqrt(3)/7 (regular, hence transversal).
    """
    b = R13_BETA_JACOBIAN @ np.array([e1, e2])
    return float(b[0]), float(b[1])


def r14_pipeline(lam: float = 1.0) -> dict:
    """1:4 constants from the staged pipeline at (mu, beta) = (5, 5/2)."""
    p = ParamPoint(lam, *R14_POINT)
    t1, M = staged_complex_normal_form(
        p, {2: set(), 3: {(2, 1), (0, 3)}}, trunc=3, branch=+1
    )
    C = M.get(2, 1)
    D = M.get(0, 3)
    c1 = -1.0j * C
    d1 = -1.0j * D
    A0 = c1 / (4.0 * abs(d1) ** 2)
    return {
        "t1": t1,
        "C": C,
        "D": D,
        "c1": c1,
        "d1": d1,
        "A0": A0,
        "a0": float(np.real(np.conj(A0))),
        "b0": float(np.imag(np.conj(A0))),
    }


def r14_omega_of_eps(e1: float, e2: float, lam: float = 1.0) -> complex:
    """The unfolding parameter omega(eps) = log zeta(eps) - i*pi/2."""
    p = ParamPoint(lam, 5.0 + e1, 2.5 + e2)
    A2 = e2_plane_linear(p)
    w = np.linalg.eigvals(A2)
    zeta = w[np.argmax(w.imag)]
    return cmath.log(zeta) - 0.5j * math.pi
