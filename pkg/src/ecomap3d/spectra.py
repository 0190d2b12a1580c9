"""Cubic characteristic polynomials and robust root solving.

The shared eigen-engine: classification, the E3 sink criterion, and the
Marotto expanding-point test all route through solve_cubic, which follows
the depressed-cubic (Cardano/trigonometric) path with a companion-matrix
fallback near double roots.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLeadingCoefficient

DEFAULT_MODULUS_EPS = 1.0e-9


@dataclass
class Cubic:
    """Coefficients of c3*t^3 + c2*t^2 + c1*t + c0."""

    c3: float
    c2: float
    c1: float
    c0: float

    def monic(self) -> tuple[float, float, float]:
        if self.c3 == 0.0:
            raise DegenerateLeadingCoefficient("leading coefficient is zero")
        return (self.c2 / self.c3, self.c1 / self.c3, self.c0 / self.c3)

    def eval(self, t: complex) -> complex:
        return ((self.c3 * t + self.c2) * t + self.c1) * t + self.c0


@dataclass
class RootTriple:
    """Three roots of a cubic, its depressed-form discriminant, and realness."""

    roots: np.ndarray  # shape (3,), complex
    discriminant: float  # (n/2)^2 + (m/3)^3 of the depressed form
    real_count: int

    def moduli(self) -> np.ndarray:
        return np.abs(self.roots)


@dataclass
class ModulusClass:
    """Counts of root moduli relative to the unit circle."""

    n_inside: int
    n_on: int
    n_outside: int


def char_poly(m: np.ndarray) -> Cubic:
    """Monic characteristic polynomial det(tI - M) of a 3x3 matrix."""
    m = np.asarray(m, dtype=float)
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    # Sum of principal 2x2 minors.
    minors = (
        m[0, 0] * m[1, 1]
        - m[0, 1] * m[1, 0]
        + m[0, 0] * m[2, 2]
        - m[0, 2] * m[2, 0]
        + m[1, 1] * m[2, 2]
        - m[1, 2] * m[2, 1]
    )
    det = float(np.linalg.det(m))
    return Cubic(1.0, -tr, minors, -det)


def depressed_form(c: Cubic) -> tuple[float, float]:
    """Coefficients (m, n) of y^3 + m*y + n after the shift t = y - c2/3."""
    a2, a1, a0 = c.monic()
    m = a1 - a2 * a2 / 3.0
    n = 2.0 * a2**3 / 27.0 - a2 * a1 / 3.0 + a0
    return m, n


def _companion_roots(c: Cubic) -> np.ndarray:
    a2, a1, a0 = c.monic()
    comp = np.array([[0.0, 0.0, -a0], [1.0, 0.0, -a1], [0.0, 1.0, -a2]])
    return np.linalg.eigvals(comp)


def _conjugate_cleanup(roots: np.ndarray, scale: float) -> tuple[np.ndarray, int]:
    """Snap near-real roots to real; pair up conjugates exactly."""
    tol = 1.0e-10 * scale
    roots = np.array(sorted(roots, key=lambda r: (r.real, r.imag)), dtype=complex)
    if np.all(np.abs(roots.imag) < tol):
        return roots.real.astype(complex), 3
    # One real root and one conjugate pair: the root with the smallest
    # |imag| is the real one.
    idx = int(np.argmin(np.abs(roots.imag)))
    others = [i for i in range(3) if i != idx]
    a, b = roots[others[0]], roots[others[1]]
    mean = 0.5 * (a + np.conj(b))
    cleaned = np.empty(3, dtype=complex)
    cleaned[0] = complex(roots[idx].real, 0.0)
    cleaned[1] = mean
    cleaned[2] = np.conj(mean)
    return cleaned, 1


def solve_cubic(c: Cubic) -> RootTriple:
    """All three roots via the depressed cubic, with conjugate cleanup.

    The reported discriminant is delta_bar = (n/2)^2 + (m/3)^3 of the
    depressed form y^3 + m*y + n: delta_bar > 0 means one real root and a
    complex pair; delta_bar <= 0 means three real roots.
    """
    if c.c3 == 0.0:
        raise DegenerateLeadingCoefficient("leading coefficient is zero")
    a2, a1, a0 = c.monic()
    m, n = depressed_form(c)
    delta_bar = (n / 2.0) ** 2 + (m / 3.0) ** 3
    scale = 1.0 + max(abs(a2), abs(a1), abs(a0))

    if abs(delta_bar) < 1.0e-14 * scale**2:
        # Near-double roots: Cardano is ill-conditioned; use the
        # companion-matrix eigenvalues instead.
        roots = _companion_roots(c)
    elif delta_bar > 0.0:
        # One real root (Cardano) plus a conjugate pair.
        sq = math.sqrt(delta_bar)
        u = math.copysign(abs(-n / 2.0 + sq) ** (1.0 / 3.0), -n / 2.0 + sq)
        vv = -n / 2.0 - sq
        v = math.copysign(abs(vv) ** (1.0 / 3.0), vv)
        y1 = u + v
        # Remaining quadratic: y^2 + y1*y + (y1^2 + m) = 0.
        disc = y1 * y1 - 4.0 * (y1 * y1 + m)
        rt = cmath.sqrt(complex(disc))
        y2 = (-y1 + rt) / 2.0
        y3 = (-y1 - rt) / 2.0
        roots = np.array([y1, y2, y3], dtype=complex) - a2 / 3.0
    else:
        # Three real roots: trigonometric method.
        p = -m / 3.0
        r = math.sqrt(p)
        arg = max(-1.0, min(1.0, (-n / 2.0) / (r**3)))
        phi = math.acos(arg)
        ys = [2.0 * r * math.cos((phi + 2.0 * math.pi * k) / 3.0) for k in range(3)]
        roots = np.array(ys, dtype=complex) - a2 / 3.0

    roots = _polish_roots(c, roots, scale)
    roots, real_count = _conjugate_cleanup(roots, scale)
    return RootTriple(roots=roots, discriminant=delta_bar, real_count=real_count)


def _polish_roots(c: Cubic, roots: np.ndarray, scale: float) -> np.ndarray:
    """Newton-refine each root; cube roots and acos lose ~1e-8 near scale 1.

    A step is taken only where the derivative is well away from zero (simple
    roots) and kept only if it reduces |p(t)|, so multiple roots and already
    machine-exact values pass through unchanged.
    """
    out = roots.copy()
    for i, t in enumerate(out):
        for _ in range(2):
            f = c.eval(t)
            df = (3.0 * c.c3 * t + 2.0 * c.c2) * t + c.c1
            if abs(df) < 1.0e-8 * scale:
                break
            t_new = t - f / df
            if abs(c.eval(t_new)) < abs(f):
                t = t_new
            else:
                break
        out[i] = t
    return out


def modulus_class(r: RootTriple, eps: float = DEFAULT_MODULUS_EPS) -> ModulusClass:
    """Bin each root modulus against the unit circle with tolerance eps."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    inside = on = outside = 0
    for rho in r.moduli():
        if abs(rho - 1.0) <= eps:
            on += 1
        elif rho < 1.0:
            inside += 1
        else:
            outside += 1
    return ModulusClass(inside, on, outside)
