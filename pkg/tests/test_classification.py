import numpy as np
import pytest

from ecomap3d import ParamPoint, classification
from ecomap3d.classification import classify_E3_sink, jury_sink
from ecomap3d.spectra import Cubic, solve_cubic


def test_origin_cases():
    assert classification.classify_O(ParamPoint(1.0, 0.5, 2.5)).kind == "StableNode"
    assert classification.classify_O(ParamPoint(1.0, 2.0, 2.5)).kind == "Saddle"


def test_e1_stable_window():
    # 1 < mu < 3 and beta*(mu-1)/mu < 1 keeps every multiplier inside.
    assert classification.classify_E1(ParamPoint(1.0, 2.5, 1.5)).kind == "StableNode"


def test_e2_focus_example():
    rep = classification.classify_E2(ParamPoint(1.0, 3.0, 2.8), check_agreement=True)
    assert "Stable" in rep.kind


def test_e3_sink_example():
    rep = classify_E3_sink(ParamPoint(4.0, 3.2, 2.734))
    assert rep.sink and rep.direct_sink
    assert rep.D1 > 0 and rep.D2 < 0 and rep.D3 > 0


def test_dual_path_sample(rng):
    for _ in range(300):
        lam = rng.uniform(0.1, 10.0)
        mu = rng.uniform(1.1, 9.5)
        beta = rng.uniform(2.1, 9.5)
        if 1 - 1 / mu - 1 / beta <= 1e-6:
            continue
        classification.classify_E2(ParamPoint(lam, mu, beta), check_agreement=True)


def test_jury_matches_roots(rng):
    for _ in range(500):
        c2, c1, c0 = rng.uniform(-2, 2, 3)
        m = float(np.max(solve_cubic(Cubic(1.0, c2, c1, c0)).moduli()))
        if abs(m - 1.0) < 1e-8:
            continue
        assert jury_sink(c2, c1, c0) == (m < 1.0)
