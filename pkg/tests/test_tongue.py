import math

import numpy as np
import pytest

from ecomap3d import ParamPoint, tongue
from ecomap3d.errors import ComplexAngleUndefined, OutOfRange, StrongResonance


def test_weak_resonance_point_closed_form():
    mu_s, beta_s = tongue.weak_resonance_point(1, 5)
    assert beta_s == pytest.approx((25 + math.sqrt(5)) / 10, abs=1e-14)
    assert mu_s == pytest.approx(6 - math.sqrt(5), abs=1e-14)


def test_validation():
    with pytest.raises(StrongResonance):
        tongue.weak_resonance_point(1, 4)
    with pytest.raises(ValueError):
        tongue.weak_resonance_point(2, 6)  # not coprime
    with pytest.raises(ValueError):
        tongue.weak_resonance_point(7, 5)


def test_rho3_matches_cubic_invariant():
    # the real part of the cubic coefficient equals -mu*^3/8 for every tongue
    for n, m in ((1, 5), (2, 5), (1, 6), (1, 7)):
        spec = tongue.tongue_coeffs(n, m)
        mu_s = spec.critical[0]
        assert spec.rho3_0 == pytest.approx(-mu_s**3 / 8.0, abs=1e-6)


def test_halfwidth_scaling_exponent():
    spec = tongue.tongue_coeffs(1, 5)
    mu_s, beta_s = spec.critical
    chis, widths = [], []
    for d in np.linspace(1e-4, 4e-3, 8):
        mu = mu_s * (1 + d)
        chi1, _, t_minus, t_plus, _ = tongue.tongue_membership(mu, beta_s, 1, 5, spec)
        chis.append(chi1)
        widths.append(t_plus - t_minus)
    slope = np.polyfit(np.log(chis), np.log(widths), 1)[0]
    assert slope == pytest.approx(1.5, abs=1e-3)


def test_membership_errors():
    with pytest.raises(OutOfRange):
        tongue.tongue_membership(2.0, 2.5, 1, 5)  # inside the unit circle region
    with pytest.raises(ComplexAngleUndefined):
        tongue.tongue_membership(50.0, 2.1, 1, 5)  # real in-plane eigenvalues


def test_period5_pair_inside_locking_window():
    # mu = 3.7660 sits inside the observed locking window at this beta
    p = ParamPoint(2.85, 3.7660, 2.72622561)
    pair = tongue.find_period_m_orbits(p, 5)
    for orb in (pair.stable_orbit, pair.saddle_orbit):
        assert orb.residual < 1e-10
        assert len(orb.points) == 5
        assert orb.in_plane
        assert orb.transversal_modulus is not None and orb.transversal_modulus > 1.0
    assert pair.stable_orbit.stable
    assert not pair.saddle_orbit.stable
