"""Closed-form fixed points O, E1, E2, E3 with existence predicates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import core, spectra
from .core import ParamPoint, State3


@dataclass
class FixedPointRecord:
    id: str  # "O", "E1", "E2", "E3"
    coords: State3
    exists: bool
    existence_margin: float
    eigen: spectra.RootTriple | None


def _record(fid: str, coords: State3, exists: bool, margin: float, p: ParamPoint) -> FixedPointRecord:
    eigen = None
    if exists:
        eigen = spectra.solve_cubic(spectra.char_poly(core.jacobian(coords, p)))
    return FixedPointRecord(fid, coords, exists, margin, eigen)


def fixed_points(p: ParamPoint) -> list[FixedPointRecord]:
    """All four candidate fixed points with existence flags and eigen-data.

    Existence (strict/non-strict exactly as stated):
      O  : always.
      E1 : mu > 1.
      E2 : mu > 1 and beta >= mu/(mu-1).
      E3 : mu > 1, lam > mu/(mu-1), beta > lam*mu/(lam*mu - lam - mu).
    """
    lam, mu, beta = p.lam, p.mu, p.beta
    out = [_record("O", State3(0.0, 0.0, 0.0), True, math.inf, p)]

    # E1
    e1 = State3(1.0 - 1.0 / mu, 0.0, 0.0)
    out.append(_record("E1", e1, mu > 1.0, mu - 1.0, p))

    # E2
    e2 = State3(1.0 / beta, 1.0 - 1.0 / mu - 1.0 / beta, 0.0)
    if mu > 1.0:
        m2 = min(mu - 1.0, beta - mu / (mu - 1.0))
        exists2 = beta >= mu / (mu - 1.0)
    else:
        m2 = mu - 1.0
        exists2 = False
    out.append(_record("E2", e2, exists2, m2, p))

    # E3
    x3 = 0.5 * (1.0 - 1.0 / mu - 1.0 / lam + 1.0 / beta)
    y3 = 1.0 / lam
    z3 = 0.5 * (1.0 - 1.0 / mu - 1.0 / lam - 1.0 / beta)
    e3 = State3(x3, y3, z3)
    margins = [mu - 1.0]
    exists3 = mu > 1.0
    if mu > 1.0:
        margins.append(lam - mu / (mu - 1.0))
        exists3 = exists3 and lam > mu / (mu - 1.0)
        denom = lam * mu - lam - mu
        if denom > 0.0:
            margins.append(beta - lam * mu / denom)
            exists3 = exists3 and beta > lam * mu / denom
        else:
            margins.append(-math.inf)
            exists3 = False
    m3 = min(margins)
    out.append(_record("E3", e3, exists3, m3, p))
    return out


def get_fixed_point(p: ParamPoint, fid: str) -> FixedPointRecord:
    for rec in fixed_points(p):
        if rec.id == fid:
            return rec
    raise KeyError(fid)


def residual(fp: State3, p: ParamPoint) -> float:
    """Sup-norm of F(fp) - fp."""
    s = fp.as_array()
    return float(np.max(np.abs(core.step_array(s, p) - s)))
