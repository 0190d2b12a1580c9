"""Truncated bivariate polynomial series and conjugation machinery.

Used by the normal-form pipelines: a planar map (real pair or a complex map
together with its implied conjugate) is carried as truncated polynomials in
two variables, composed with near-identity substitutions, and inverted by
fixed-point iteration.  Everything is exact up to the truncation degree
because the underlying map is polynomial.
"""

from __future__ import annotations

import numpy as np


class Poly2:
    """Polynomial in two (commuting) variables, truncated at total degree."""

    __slots__ = ("c", "trunc")

    def __init__(self, coeffs: dict | None = None, trunc: int = 4):
        self.trunc = trunc
        self.c = {}
        if coeffs:
            for k, v in coeffs.items():
                if k[0] + k[1] <= trunc and v != 0:
                    self.c[k] = v

    @staticmethod
    def zero(trunc: int) -> "Poly2":
        return Poly2({}, trunc)

    @staticmethod
    def var(i: int, trunc: int) -> "Poly2":
        return Poly2({(1, 0) if i == 0 else (0, 1): 1.0}, trunc)

    def copy(self) -> "Poly2":
        out = Poly2.zero(self.trunc)
        out.c = dict(self.c)
        return out

    def get(self, j: int, k: int):
        return self.c.get((j, k), 0.0)

    def __add__(self, other: "Poly2") -> "Poly2":
        out = self.copy()
        for k, v in other.c.items():
            out.c[k] = out.c.get(k, 0.0) + v
            if out.c[k] == 0:
                del out.c[k]
        return out

    def __sub__(self, other: "Poly2") -> "Poly2":
        return self + other.scale(-1.0)

    def scale(self, a) -> "Poly2":
        out = Poly2.zero(self.trunc)
        if a != 0:
            out.c = {k: a * v for k, v in self.c.items()}
        return out

    def __mul__(self, other: "Poly2") -> "Poly2":
        out = Poly2.zero(self.trunc)
        for (j1, k1), v1 in self.c.items():
            for (j2, k2), v2 in other.c.items():
                j, k = j1 + j2, k1 + k2
                if j + k <= self.trunc:
                    key = (j, k)
                    out.c[key] = out.c.get(key, 0.0) + v1 * v2
        return out

    def pow_cache(self, maxp: int) -> list["Poly2"]:
        one = Poly2({(0, 0): 1.0}, self.trunc)
        pows = [one]
        for _ in range(maxp):
            pows.append(pows[-1] * self)
        return pows

    def compose(self, s0: "Poly2", s1: "Poly2") -> "Poly2":
        """Substitute variable 0 -> s0, variable 1 -> s1."""
        maxj = max((j for j, _ in self.c), default=0)
        maxk = max((k for _, k in self.c), default=0)
        p0 = s0.pow_cache(maxj)
        p1 = s1.pow_cache(maxk)
        out = Poly2.zero(self.trunc)
        for (j, k), v in self.c.items():
            out = out + (p0[j] * p1[k]).scale(v)
        return out

    def conj_swap(self) -> "Poly2":
        """Series of the complex conjugate: coeff (j,k) -> conj(coeff(k,j)).

        If S(w, wbar) represents a complex quantity, conj(S) as a function of
        (w, wbar) has this series.
        """
        out = Poly2.zero(self.trunc)
        out.c = {(j, k): np.conj(v) for (k, j), v in self.c.items()}
        return out

    def truncate_to(self, deg: int) -> "Poly2":
        out = Poly2.zero(self.trunc)
        out.c = {k: v for k, v in self.c.items() if k[0] + k[1] <= deg}
        return out

    def degree_part(self, deg: int) -> dict:
        return {k: v for k, v in self.c.items() if k[0] + k[1] == deg}

    def eval(self, x0, x1):
        tot = 0.0
        for (j, k), v in self.c.items():
            tot += v * x0**j * x1**k
        return tot


# ---------------------------------------------------------------------------
# Complex scalar map machinery: the map is z' = M(z, zbar); the second
# component is implied as conj (M.conj_swap()).
# ---------------------------------------------------------------------------


def complex_conjugate_change(M: Poly2, H: Poly2) -> Poly2:
    """Conjugate the complex map M by the substitution z = H(w, wbar).

    H must be a near-identity series H = w + (higher order).  Returns the new
    map N with z' = M(z, zbar) expressed as w' = N(w, wbar).
    """
    trunc = M.trunc
    Hbar = H.conj_swap()
    # z' as a series in (w, wbar).
    zp = M.compose(H, Hbar)
    # Solve H(w', wbar') = z' for w' by fixed-point iteration:
    # w' = z' - (H - id)(w', wbar').
    ident = Poly2({(1, 0): 1.0}, trunc)
    Hrem = H - ident
    wp = zp.copy()
    for _ in range(trunc):
        wp = zp - Hrem.compose(wp, wp.conj_swap())
    return wp


def remove_degree_complex(M: Poly2, lam: complex, degree: int, resonant: set) -> Poly2:
    """One normal-form stage: remove all non-resonant degree-d terms of M.

    M must have linear part lam * z.  Terms (j,k) in `resonant` are kept.
    """
    H = Poly2({(1, 0): 1.0}, M.trunc)
    for (j, k), v in M.degree_part(degree).items():
        if (j, k) in resonant:
            continue
        denom = lam**j * np.conj(lam) ** k - lam
        H.c[(j, k)] = v / denom
    return complex_conjugate_change(M, H)


# ---------------------------------------------------------------------------
# Real planar map machinery for the 1:2 (Jordan block) pipeline.
# ---------------------------------------------------------------------------


def compose_map(M: tuple[Poly2, Poly2], H: tuple[Poly2, Poly2]) -> tuple[Poly2, Poly2]:
    return (M[0].compose(H[0], H[1]), M[1].compose(H[0], H[1]))


def real_conjugate_change(
    M: tuple[Poly2, Poly2], H: tuple[Poly2, Poly2]
) -> tuple[Poly2, Poly2]:
    """Conjugate the planar map M by the near-identity substitution x = H(u).

    Returns N = H^{-1} o M o H, exact up to the truncation degree.
    """
    trunc = M[0].trunc
    MH = compose_map(M, H)
    id0 = Poly2({(1, 0): 1.0}, trunc)
    id1 = Poly2({(0, 1): 1.0}, trunc)
    R0 = H[0] - id0
    R1 = H[1] - id1
    N = (MH[0].copy(), MH[1].copy())
    for _ in range(trunc):
        N = (MH[0] - R0.compose(N[0], N[1]), MH[1] - R1.compose(N[0], N[1]))
    return N


def _monomials(degree: int) -> list[tuple[int, int]]:
    return [(degree - k, k) for k in range(degree + 1)]


def homological_stage_real(
    M: tuple[Poly2, Poly2],
    A: np.ndarray,
    degree: int,
    resonant: list[tuple[int, tuple[int, int]]],
) -> tuple[tuple[Poly2, Poly2], dict]:
    """Remove degree-d terms of M up to the resonant complement.

    A is the (2x2) linear part of M.  `resonant` lists (component, (i,j))
    monomial slots allowed to survive; their fitted coefficients are
    returned alongside the conjugated map.  The linear operator
    L(Phi) = A.Phi - Phi o A is built by direct polynomial arithmetic and
    the removal equation is solved in least squares over the augmented
    system [L | resonant basis]; the fit must be exact (residual ~ 0)
    because the resonant slots span the cokernel.
    """
    trunc = M[0].trunc
    mons = _monomials(degree)
    nmon = len(mons)
    nun = 2 * nmon
    Alin0 = Poly2({(1, 0): A[0, 0], (0, 1): A[0, 1]}, trunc)
    Alin1 = Poly2({(1, 0): A[1, 0], (0, 1): A[1, 1]}, trunc)

    def flatten(p0: Poly2, p1: Poly2) -> np.ndarray:
        v = np.zeros(nun)
        for i, mkey in enumerate(mons):
            v[i] = p0.get(*mkey)
            v[nmon + i] = p1.get(*mkey)
        return v

    cols = []
    for comp in range(2):
        for mkey in mons:
            phi = Poly2({mkey: 1.0}, trunc)
            phi_of_A = phi.compose(Alin0, Alin1)
            if comp == 0:
                l0 = phi.scale(A[0, 0]) - phi_of_A
                l1 = phi.scale(A[1, 0])
            else:
                l0 = phi.scale(A[0, 1])
                l1 = phi.scale(A[1, 1]) - phi_of_A
            cols.append(flatten(l0.truncate_to(degree), l1.truncate_to(degree)))
    res_cols = []
    for comp, mkey in resonant:
        v = np.zeros(nun)
        idx = mons.index(mkey) + (nmon if comp == 1 else 0)
        v[idx] = 1.0
        res_cols.append(v)

    target = flatten(
        Poly2(M[0].degree_part(degree), trunc), Poly2(M[1].degree_part(degree), trunc)
    )
    Amat = np.column_stack(cols + res_cols)
    sol, *_ = np.linalg.lstsq(Amat, target, rcond=None)
    resid = float(np.linalg.norm(Amat @ sol - target))
    if resid > 1.0e-8 * (1.0 + np.linalg.norm(target)):
        raise ArithmeticError(f"homological stage not solvable, residual {resid}")

    phi0 = Poly2({(1, 0): 1.0}, trunc)
    phi1 = Poly2({(0, 1): 1.0}, trunc)
    # Conjugation by x = u + Phi adds L(Phi) to the degree-d part, so the Phi
    # that removes the non-resonant terms is minus the solved one.
    for i, mkey in enumerate(mons):
        if sol[i] != 0:
            phi0.c[mkey] = phi0.c.get(mkey, 0.0) - sol[i]
        if sol[nmon + i] != 0:
            phi1.c[mkey] = phi1.c.get(mkey, 0.0) - sol[nmon + i]
    N = real_conjugate_change(M, (phi0, phi1))
    kept = {
        (comp, mkey): sol[2 * nmon + i] for i, (comp, mkey) in enumerate(resonant)
    }
    return N, kept
