"""Topological typing of the fixed points O, E1, E2 and the E3 sink test.

E2 classification runs two independent paths — explicit parameter-region
predicates and direct eigenvalue moduli — and raises InternalDisagreement
if they differ, so transcription bugs surface in tests rather than plots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import core, spectra
from .core import ParamPoint
from .errors import InternalDisagreement, NotExisting
from .fixed_points import get_fixed_point

NH_TOL = 1.0e-9

KINDS = (
    "StableNode",
    "UnstableNode",
    "Saddle",
    "StableFocusNode",
    "UnstableFocusNode",
    "SaddleFocus",
    "NonHyperbolic",
)


@dataclass
class TopoType:
    kind: str
    table_case: str
    eigen_summary: spectra.ModulusClass
    roots: object = None


@dataclass
class E2Thresholds:
    """Derived quantities for the in-plane quadratic factor at E2."""

    gamma1: float
    gamma2: float
    t_star: float
    disc: float

    @staticmethod
    def at(p: ParamPoint) -> "E2Thresholds":
        lam, mu, beta = p.lam, p.mu, p.beta
        rad = beta**4 - 2.0 * beta**3
        if rad >= 0.0:
            g1 = 2.0 * beta**2 - 2.0 * beta - 2.0 * math.sqrt(rad)
            g2 = 2.0 * beta**2 - 2.0 * beta + 2.0 * math.sqrt(rad)
        else:
            g1 = math.nan
            g2 = math.nan
        t_star = (2.0 * beta - mu) / (2.0 * beta)
        disc = ((2.0 * beta - mu) / beta) ** 2 - 4.0 * mu * (beta - 2.0) / beta
        return E2Thresholds(g1, g2, t_star, disc)


def e2_real_eigenvalue(p: ParamPoint) -> float:
    """The z-direction multiplier lam*(beta*mu - beta - mu)/(beta*mu) at E2."""
    return p.lam * (p.beta * p.mu - p.beta - p.mu) / (p.beta * p.mu)


def e2_inplane_pair(p: ParamPoint) -> tuple[complex, complex]:
    """Roots t1, t2 of the in-plane quadratic factor at E2."""
    import cmath

    mu, beta = p.mu, p.beta
    tr = (2.0 * beta - mu) / beta
    det = mu * (beta - 2.0) / beta
    rt = cmath.sqrt(complex(tr * tr - 4.0 * det))
    return ((tr + rt) / 2.0, (tr - rt) / 2.0)


def _direct_kind(trip: spectra.RootTriple, tol: float = NH_TOL) -> tuple[str, spectra.ModulusClass]:
    mc = spectra.modulus_class(trip, tol)
    if mc.n_on > 0:
        return "NonHyperbolic", mc
    has_complex = trip.real_count == 1
    if mc.n_inside == 3:
        return ("StableFocusNode" if has_complex else "StableNode"), mc
    if mc.n_outside == 3:
        return ("UnstableFocusNode" if has_complex else "UnstableNode"), mc
    return ("SaddleFocus" if has_complex else "Saddle"), mc


def classify_O(p: ParamPoint, tol: float = NH_TOL) -> TopoType:
    rec = get_fixed_point(p, "O")
    mc = spectra.modulus_class(rec.eigen, tol)
    if abs(p.mu - 1.0) <= tol:
        return TopoType("NonHyperbolic", "L1", mc, rec.eigen)
    if p.mu < 1.0:
        return TopoType("StableNode", "D1", mc, rec.eigen)
    return TopoType("Saddle", "D2", mc, rec.eigen)


def classify_E1(p: ParamPoint, tol: float = NH_TOL) -> TopoType:
    mu, beta = p.mu, p.beta
    if mu <= 1.0:
        raise NotExisting("E1 requires mu > 1")
    rec = get_fixed_point(p, "E1")
    mc = spectra.modulus_class(rec.eigen, tol)
    bcrit = mu / (mu - 1.0)
    on_flip = abs(mu - 3.0) <= tol
    on_exch = abs(beta - bcrit) <= tol
    if on_flip:
        return TopoType("NonHyperbolic", "L2", mc, rec.eigen)
    if on_exch:
        case = "L1" if mu < 3.0 else "L3"
        return TopoType("NonHyperbolic", case, mc, rec.eigen)
    if mu < 3.0:
        if beta < bcrit:
            return TopoType("StableNode", "D1", mc, rec.eigen)
        return TopoType("Saddle", "D31", mc, rec.eigen)
    if beta < bcrit:
        return TopoType("Saddle", "D32", mc, rec.eigen)
    return TopoType("UnstableNode", "D2", mc, rec.eigen)


def _lam_band(lam: float, lam_crit: float, tol: float) -> int:
    """-1 below, 0 on, +1 above the critical lambda."""
    if math.isinf(lam_crit):
        return -1
    if abs(lam - lam_crit) <= tol * max(1.0, abs(lam_crit)):
        return 0
    return -1 if lam < lam_crit else 1


def _e2_table_case(p: ParamPoint, tol: float) -> tuple[str, str]:
    """(kind, case) per the explicit parameter-region table."""
    lam, mu, beta = p.lam, p.mu, p.beta
    th = E2Thresholds.at(p)
    denom = mu * beta - mu - beta
    lam_crit = mu * beta / denom if denom > 0.0 else math.inf
    band = _lam_band(lam, lam_crit, tol)
    flip_mu = 3.0 * beta / (3.0 - beta) if beta < 3.0 else math.inf
    ns_mu = beta / (beta - 2.0) if beta > 2.0 else math.inf

    def trip(kinds_cases):
        kind_lo, case_lo, case_on, kind_hi, case_hi = kinds_cases
        if band == 0:
            return ("NonHyperbolic", case_on)
        return (kind_lo, case_lo) if band < 0 else (kind_hi, case_hi)

    if beta <= 1.5:
        return trip(("Saddle", "D31", "L11", "Saddle", "D32"))

    if beta <= 2.0:
        if abs(mu - flip_mu) <= tol * max(1.0, flip_mu):
            return ("NonHyperbolic", "L22")
        if mu < flip_mu:
            return trip(("StableNode", "D11", "L21", "Saddle", "D33"))
        return trip(("Saddle", "D34", "L13", "Saddle", "D35"))

    g1, g2 = th.gamma1, th.gamma2

    if beta < 2.25:
        if abs(mu - flip_mu) <= tol * max(1.0, flip_mu):
            return ("NonHyperbolic", "L23")
        if mu <= g1:
            return trip(("StableNode", "D12", "L14", "Saddle", "D36"))
        if mu < g2:
            return trip(("StableFocusNode", "D51", "L15", "SaddleFocus", "D61"))
        if mu < flip_mu:
            return trip(("StableNode", "D13", "L16", "Saddle", "D37"))
        return trip(("Saddle", "D38", "L17", "Saddle", "D39"))

    if abs(beta - 2.25) <= 0.0:  # beta == 9/4 exactly: ns_mu == g2 == 9
        if abs(mu - 9.0) <= tol * 9.0:
            return ("NonHyperbolic", "L24")
        if mu <= g1:
            return trip(("StableNode", "D14", "L18", "Saddle", "D41"))
        if mu < 9.0:
            return trip(("StableFocusNode", "D52", "L19", "SaddleFocus", "D62"))
        return trip(("Saddle", "D42", "L1-10", "Saddle", "D43"))

    if beta < 3.0:
        if abs(mu - ns_mu) <= tol * max(1.0, ns_mu):
            return ("NonHyperbolic", "L31")
        if abs(mu - flip_mu) <= tol * max(1.0, flip_mu):
            return ("NonHyperbolic", "L25")
        if mu <= g1:
            return trip(("StableNode", "D15", "L1-11", "Saddle", "D44"))
        if mu < ns_mu:
            return trip(("StableFocusNode", "D53", "L1-12", "SaddleFocus", "D63"))
        if mu < g2:
            return trip(("SaddleFocus", "D64", "L1-13", "UnstableFocusNode", "D71"))
        if mu < flip_mu:
            return trip(("Saddle", "D45", "L1-14", "UnstableNode", "D21"))
        return trip(("Saddle", "D46", "L1-15", "Saddle", "D47"))

    # beta >= 3
    if abs(mu - ns_mu) <= tol * max(1.0, ns_mu):
        return ("NonHyperbolic", "L32")
    if mu <= g1:
        return trip(("StableNode", "D16", "L1-16", "Saddle", "D48"))
    if mu < ns_mu:
        return trip(("StableFocusNode", "D54", "L1-17", "SaddleFocus", "D65"))
    if mu < g2:
        return trip(("SaddleFocus", "D66", "L1-18", "UnstableFocusNode", "D72"))
    return trip(("Saddle", "D49", "L1-19", "UnstableNode", "D22"))


def classify_E2(p: ParamPoint, tol: float = NH_TOL, check_agreement: bool = True) -> TopoType:
    rec = get_fixed_point(p, "E2")
    if not rec.exists:
        raise NotExisting("E2 requires mu > 1 and beta >= mu/(mu-1)")
    kind_direct, mc = _direct_kind(rec.eigen, tol)
    kind_table, case = _e2_table_case(p, tol)
    # Near-boundary NonHyperbolic detections are allowed to differ in which
    # path triggers; genuine hyperbolic disagreements are bugs.
    if check_agreement and kind_direct != kind_table:
        if "NonHyperbolic" not in (kind_direct, kind_table):
            raise InternalDisagreement(
                f"table={kind_table}({case}) vs eigen={kind_direct} at "
                f"(lam={p.lam}, mu={p.mu}, beta={p.beta})"
            )
        kind_table = "NonHyperbolic"
    return TopoType(kind_table, case, mc, rec.eigen)


@dataclass
class E3SinkReport:
    sink: bool
    D1: float
    D2: float
    D3: float
    direct_sink: bool
    nonhyperbolic: bool


def classify_E3_sink(p: ParamPoint, tol: float = NH_TOL) -> E3SinkReport:
    """Jury-type sink test for E3, cross-checked against root moduli.

    The characteristic polynomial is written as -t^3 + D1 t^2 + D2 t + D3,
    i.e. monic t^3 + c2 t^2 + c1 t + c0 with c2 = -D1, c1 = -D2, c0 = -D3.
    The Schur-Cohn conditions for all roots inside the unit circle are
      |c0 + c2| < 1 + c1,  |c2 - 3 c0| < 3 - c1,  c0^2 + c1 - c0 c2 < 1.
    """
    rec = get_fixed_point(p, "E3")
    if not rec.exists:
        raise NotExisting("E3 does not exist at these parameters")
    cub = spectra.char_poly(core.jacobian(rec.coords, p))
    c2, c1, c0 = cub.monic()
    D1, D2, D3 = -c2, -c1, -c0
    sink = jury_sink(c2, c1, c0)
    mc = spectra.modulus_class(rec.eigen, tol)
    nonhyp = mc.n_on > 0
    direct = (mc.n_inside == 3) and not nonhyp
    if nonhyp:
        sink = False
    return E3SinkReport(sink, D1, D2, D3, direct, nonhyp)


def jury_sink(c2: float, c1: float, c0: float) -> bool:
    """Schur-Cohn test: all roots of t^3 + c2 t^2 + c1 t + c0 inside |t|<1."""
    return (
        abs(c0 + c2) < 1.0 + c1
        and abs(c2 - 3.0 * c0) < 3.0 - c1
        and c0 * c0 + c1 - c0 * c2 < 1.0
    )
