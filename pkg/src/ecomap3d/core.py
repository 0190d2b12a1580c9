"""The 3D discrete logistic predator-prey map, its Jacobian, and orbit iteration.

The map is
    F(x, y, z) = (mu*x*(1 - x - y - z), beta*y*(x - z), lam*y*z)
with positive parameters (lam, mu, beta).  F is globally quadratic, so its
second-order Taylor data is exact and independent of the expansion point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels

DIVERGENCE_BOUND = 1.0e6


@dataclass(frozen=True)
class ParamPoint:
    """Parameter triple (lam, mu, beta); all strictly positive."""

    lam: float
    mu: float
    beta: float

    def __post_init__(self):
        if not (self.lam > 0 and self.mu > 0 and self.beta > 0):
            raise ValueError("all parameters must be strictly positive")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.lam, self.mu, self.beta)


@dataclass(frozen=True)
class State3:
    """A phase-space point (x, y, z)."""

    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @staticmethod
    def from_array(a) -> "State3":
        return State3(float(a[0]), float(a[1]), float(a[2]))


# Matrix3 is carried as a (3, 3) float ndarray throughout the package.
Matrix3 = np.ndarray


@dataclass
class OrbitSeries:
    """Recorded tail of an orbit plus divergence bookkeeping."""

    states: np.ndarray  # shape (k, 3)
    transient_skipped: int
    diverged: bool = False
    divergence_step: int = -1
    extras: dict = field(default_factory=dict)


def step(s: State3, p: ParamPoint) -> State3:
    """One application of the map."""
    x, y, z = s.x, s.y, s.z
    return State3(
        p.mu * x * (1.0 - x - y - z),
        p.beta * y * (x - z),
        p.lam * y * z,
    )


def step_array(s: np.ndarray, p: ParamPoint) -> np.ndarray:
    """One application of the map on a length-3 array."""
    x, y, z = float(s[0]), float(s[1]), float(s[2])
    return np.array(
        [
            p.mu * x * (1.0 - x - y - z),
            p.beta * y * (x - z),
            p.lam * y * z,
        ]
    )


def jacobian(s: State3 | np.ndarray, p: ParamPoint) -> Matrix3:
    """Exact Jacobian of the map at s."""
    if isinstance(s, State3):
        x, y, z = s.x, s.y, s.z
    else:
        x, y, z = float(s[0]), float(s[1]), float(s[2])
    mu, beta, lam = p.mu, p.beta, p.lam
    return np.array(
        [
            [mu * (1.0 - 2.0 * x - y - z), -mu * x, -mu * x],
            [beta * y, beta * (x - z), -beta * y],
            [0.0, lam * z, lam * y],
        ]
    )


def quadratic_part(u: np.ndarray, p: ParamPoint) -> np.ndarray:
    """The (exact, point-independent) quadratic part Q(u) of F.

    F(s + u) = F(s) + J(s) u + Q(u) for every state s.
    """
    ux, uy, uz = float(u[0]), float(u[1]), float(u[2])
    return np.array(
        [
            -p.mu * ux * (ux + uy + uz),
            p.beta * uy * (ux - uz),
            p.lam * uy * uz,
        ]
    )


def bilinear_part(u: np.ndarray, v: np.ndarray, p: ParamPoint) -> np.ndarray:
    """Symmetric bilinear form B with Q(u) = B(u, u).

    Supports complex vectors (used by the planar normal-form pipeline).
    """
    ux, uy, uz = u[0], u[1], u[2]
    vx, vy, vz = v[0], v[1], v[2]
    return np.array(
        [
            -p.mu * 0.5 * (ux * (vx + vy + vz) + vx * (ux + uy + uz)),
            p.beta * 0.5 * (uy * (vx - vz) + vy * (ux - uz)),
            p.lam * 0.5 * (uy * vz + vy * uz),
        ]
    )


def iterate(s0: State3, p: ParamPoint, n: int, transient: int = 0) -> OrbitSeries:
    """Apply the map transient+n times, recording the last n states."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out, diverged, dstep = _kernels.iterate_orbit(
        s0.x, s0.y, s0.z, p.lam, p.mu, p.beta, n, transient, DIVERGENCE_BOUND
    )
    return OrbitSeries(
        states=out,
        transient_skipped=transient,
        diverged=bool(diverged),
        divergence_step=int(dstep),
    )
