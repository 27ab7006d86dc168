import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_gaps.spectrum import (
    lemma_regime_bound,
    nearest_primitive,
    nearest_primitive_many,
    spectrum_curve,
    spectrum_value,
    spectrum_values,
    tie_key,
)

from .conftest import PHI


def slow_nearest(x, radius=5):
    """Every integer point in a square around round(x), sorted by (distance, tie_key)."""
    c0, c1 = round(x[0]), round(x[1])
    cands = []
    for p in range(c0 - radius, c0 + radius + 1):
        for q in range(c1 - radius, c1 + radius + 1):
            if math.gcd(p, q) == 1:
                cands.append(((p - x[0]) ** 2 + (q - x[1]) ** 2, tie_key(p, q), (p, q)))
    d2, _, w = min(cands)
    return w, math.sqrt(d2)


def test_nearest_primitive_half_half():
    w, d = nearest_primitive((0.5, 0.5))
    assert w == (0, 1)
    assert d == pytest.approx(math.sqrt(2) / 2, abs=1e-12)


def test_nearest_primitive_origin():
    assert nearest_primitive((0.0, 0.0)) == ((0, 1), 1.0)


def test_nearest_primitive_in_a_desert():
    # (6, 0) and (7, 0) are not primitive
    w, d = nearest_primitive((6.5, 0.01))
    ow, od = slow_nearest((6.5, 0.01))
    assert w == ow == (6, 1)
    assert d == pytest.approx(od, abs=1e-12)
    assert d == pytest.approx(1.1093, abs=1e-3)


def test_far_from_primitive_points():
    # around (30, 0): 29, 31 prime, (30, +-1) primitive
    w, d = nearest_primitive((30.0, 0.0))
    assert d == 1.0 and w == (30, 1)


def test_nearest_primitive_matches_slow_scan():
    rng = np.random.default_rng(0)
    pts = np.concatenate([rng.uniform(-40, 40, size=(150, 2)),
                          np.column_stack([rng.integers(-40, 40, 50) + rng.uniform(-0.5, 0.5, 50),
                                           rng.uniform(-0.2, 0.2, 50)])])
    for x in pts:
        w, d = nearest_primitive(x)
        ow, od = slow_nearest(tuple(x))
        assert w == ow
        assert d == pytest.approx(od, abs=1e-12)


@settings(max_examples=300)
@given(st.floats(-1e4, 1e4), st.floats(-1e4, 1e4))
def test_vectorised_matches_scalar(x, y):
    w, d = nearest_primitive((x, y))
    W, D = nearest_primitive_many(np.array([[x, y]]))
    assert tuple(W[0]) == w
    assert D[0] == d


def test_vectorised_fallback_path():
    # distance to Z^2_prim > 2.5 forces the ring search
    X = np.array([[0.0, 0.0], [6.5, 0.01], [2 * 3 * 5 * 7 * 11 + 0.0, 0.0]])
    W, D = nearest_primitive_many(X)
    for x, w, d in zip(X, W, D):
        assert (tuple(w), d) == nearest_primitive(x)


def test_spectrum_golden_examples():
    s1 = spectrum_value((1, PHI), 1)
    assert s1.value == pytest.approx(2 - PHI, abs=1e-12)
    assert s1.witness == (1, 2)
    s4 = spectrum_value((1, PHI), 4)
    assert s4.value == pytest.approx(abs(2 * PHI - 3) / 2, abs=1e-12)
    assert s4.witness == (2, 3)
    assert abs(s4.value - math.hypot(*np.subtract(s4.scaled_point, s4.witness)) / 2) < 1e-12


def test_spectrum_vanishes_at_own_period():
    # v = 3/2 (1, 2) has period 4/9
    s = spectrum_value((1.5, 3.0), 4 / 9)
    assert s.value == pytest.approx(0.0, abs=1e-12)
    assert s.witness == (1, 2)


def test_spectrum_errors():
    with pytest.raises(ValueError):
        spectrum_value((0, 0), 1)
    with pytest.raises(ValueError):
        spectrum_value((1, 1), 0)
    with pytest.raises(ValueError):
        spectrum_curve((1, 1), [2, 1])
    with pytest.raises(ValueError):
        spectrum_curve((1, 1), [])


def test_spectrum_curve():
    [only] = spectrum_curve((1, PHI), [1])
    assert only == spectrum_value((1, PHI), 1)
    vals = [s.value for s in spectrum_curve((1, PHI), [1, 4])]
    assert vals == pytest.approx([0.38197, 0.11803], abs=1e-5)
    v = (1, PHI)
    vn = math.hypot(*v)
    for s in spectrum_curve(v, np.linspace(1e-8, 1e-6, 10)):
        r = math.sqrt(s.rho)
        assert 1 - r * vn <= r * s.value <= 1 + r * vn


def test_lemma_regime():
    rng = np.random.default_rng(1)
    for _ in range(20):
        v = tuple(rng.uniform(-10, 10, size=2))
        top = lemma_regime_bound(v)
        rhos = top * np.exp(rng.uniform(-15, 0, size=20))
        D = spectrum_values(v, rhos)
        s = np.sqrt(rhos)
        assert np.all(D >= 0.5 / s - 1e-10)
        assert np.all(D <= 1 / s + 1e-10)


def test_global_upper_bound_fails_off_regime():
    # at rho = 1 the point (6.5, 0.01) is farther than 1/sqrt(rho) from Z^2_prim
    assert spectrum_value((6.5, 0.01), 1.0).value > 1.0


@pytest.mark.parametrize("lam", [0.3, 2.0, 17.5])
def test_scale_covariance(lam):
    v = (1.0, math.pi / 2)
    for rho in [0.01, 0.7, 3.0, 40.0]:
        lhs = spectrum_value((lam * v[0], lam * v[1]), rho).value
        rhs = lam * spectrum_value(v, lam * lam * rho).value
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_spectrum_values_matches_scalar():
    v = (math.sqrt(2), 1.0)
    rhos = np.geomspace(1e-5, 1e3, 50)
    vec = spectrum_values(v, rhos)
    assert vec == pytest.approx([spectrum_value(v, r).value for r in rhos], rel=1e-13)


def test_positive_for_irrational_slope():
    assert np.all(spectrum_values((1, PHI), np.geomspace(1e-4, 1e4, 200)) > 0)
