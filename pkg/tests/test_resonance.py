import math

import numpy as np
import pytest

from ecomap3d import ParamPoint, resonance
from ecomap3d.errors import OutOfRange
from ecomap3d.resonance import (
    bifurcation_curve,
    detect_strong_resonance,
    eq1310_equilibrium_radius,
    integrate_normal_form,
)


def test_detection_on_and_off_point():
    rep = detect_strong_resonance(ParamPoint(1.0, 9.0, 2.25))
    assert rep is not None and rep.kind == "R12"
    assert detect_strong_resonance(ParamPoint(1.0, 8.9, 2.25)) is None


def test_r12_constants_structure():
    c = resonance.r12_constants(0.0, 0.0)
    assert c["C"] == pytest.approx(243 / 4, abs=0) and c["D"] == pytest.approx(2187 / 4, abs=0)
    assert c["nondegenerate"]
    assert c["D0_plus_3C0"] == pytest.approx(729.0, abs=1e-12)


def test_r13_pipeline_agreement():
    c = resonance.r13_constants()
    assert abs(c["b1"] - c["b1_pipeline"]) < 1e-8
    assert c["Rc"] == pytest.approx(-5 / 3, abs=1e-8)


def test_r14_region():
    c = resonance.r14_constants()
    assert c["region"] == "I"
    assert c["a0"] == pytest.approx(-8 / 325, abs=1e-8)
    assert c["b0"] == pytest.approx(-4 / 325, abs=1e-8)


def test_bifurcation_curves():
    # the flip and NS curves pass through the 1:2 point (mu, beta) = (9, 9/4)
    assert bifurcation_curve("R12", "L2p", 2.25) == pytest.approx(9.0, abs=1e-12)
    assert bifurcation_curve("R12", "L3p", 2.25) == pytest.approx(9.0, abs=1e-12)
    with pytest.raises(OutOfRange):
        bifurcation_curve("R12", "L2p", 3.5)
    with pytest.raises(KeyError):
        bifurcation_curve("R12", "nope", 2.5)


def test_rk4_fourth_order_convergence():
    params = {"delta1": 0.5, "delta2": -0.1}
    fine = integrate_normal_form("Eq129", params, (0.4, 0.3), 2.0, dt=1e-3)
    mid = integrate_normal_form("Eq129", params, (0.4, 0.3), 2.0, dt=0.025)
    coarse = integrate_normal_form("Eq129", params, (0.4, 0.3), 2.0, dt=0.05)
    ref = fine.samples[-1]
    e_mid = np.max(np.abs(mid.samples[-1] - ref))
    e_coarse = np.max(np.abs(coarse.samples[-1] - ref))
    assert e_coarse / e_mid > 8.0  # ~16 for a 4th-order scheme


def test_eq1310_equilibrium_radius_consistency():
    # at leading order the nontrivial equilibria of the 1:3 flow sit at
    # rho = sqrt(beta1^2 + beta2^2); check the rhs is O(rho^2) there
    b1, b2 = 1e-3, 2e-3
    rho = eq1310_equilibrium_radius(b1, b2)
    assert rho == pytest.approx(math.hypot(b1, b2), rel=1e-15)
    # solve sin/cos from the leading-order balance and evaluate the rhs
    iota = math.atan2(b2 / rho, -b1 / rho) / 3.0
    c = resonance.r13_constants()
    f = resonance._rhs("Eq1310", {"beta1": b1, "beta2": b2, "Rc": c["Rc"], "Ic": c["Ic"]})
    res = f(np.array([rho, iota]))
    assert np.max(np.abs(res)) < (abs(c["Rc"]) + abs(c["Ic"]) + 1.0) * rho**2


def test_trajectory_divergence_flag():
    traj = integrate_normal_form("Eq129", {"delta1": 5.0, "delta2": 5.0}, (2.0, 2.0), 50.0, dt=1e-2)
    assert traj.diverged
