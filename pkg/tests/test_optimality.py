import math

import numpy as np
import pytest

from lattice_gaps.numeric import UnimodularMatrix
from lattice_gaps.optimality import (
    contracting_approx,
    diophantine_recover,
    diophantine_truth,
    max_int_below,
    near_optimal_shear,
    period_window,
    recover_bruteforce,
    recover_details,
)

from .conftest import HALF_PI, PHI


@pytest.mark.parametrize("T, n", [(10, 9), (1000, 999), (3, 2), (1.5, 0), ("10.1", 10)])
def test_max_int_below(T, n):
    assert max_int_below(T) == n


def test_shear_example():
    c = near_optimal_shear((1, PHI), 1000)
    assert c.gamma == UnimodularMatrix(1, 999, 0, 1)
    assert c.w == (1 + 999 * PHI, 0.0)
    assert c.dist == pytest.approx(PHI)
    assert c.holds


def test_shear_other_branch():
    c = near_optimal_shear((3.0, 1.0 / PHI), 100)
    assert c.gamma == UnimodularMatrix(1, 0, 99, 1)
    assert c.w[0] == 0.0
    assert c.holds


def test_shear_rejects():
    with pytest.raises(ValueError):
        near_optimal_shear((1, 2), 100)
    with pytest.raises(ValueError):
        near_optimal_shear((1, PHI), 5)


def test_shear_random():
    rng = np.random.default_rng(1)
    for _ in range(100):
        v = tuple(rng.uniform(-10, 10, size=2))
        for T in (10, 1000):
            c = near_optimal_shear(v, T)
            assert c.dist >= c.bound * (1 - 1e-12)
            assert c.holds


def test_contraction_example():
    c = contracting_approx((1, PHI), 2, 1000, 0.1)
    assert c.N == 999
    assert c.gamma == UnimodularMatrix(999, -1, 1, 0)
    assert c.w0 == (1.0, 1.5)
    assert c.holds
    # alpha is within 2 D / (a N) of 1
    assert abs(c.alpha - 1) <= 2 * c.D / 999 * (1 + 1e-9)
    gv = c.gamma((1.0, PHI))
    assert math.hypot(gv[0] - c.w[0], gv[1] - c.w[1]) == pytest.approx(c.dist)


def test_contraction_negative_first_coordinate():
    c = contracting_approx((-1.0, HALF_PI), 3, 500, 0.1)
    assert c.holds


def test_contraction_rejects():
    with pytest.raises(ValueError):
        contracting_approx((1, PHI), 1, 100, 0.1)
    with pytest.raises(ValueError):
        contracting_approx((0, PHI), 2, 100, 0.1)
    with pytest.raises(ValueError):
        contracting_approx((1, PHI), 2, 100, 0)


def test_truth_values():
    assert diophantine_truth((1, PHI), 1) == pytest.approx(2 - PHI)
    assert diophantine_truth((1, PHI), 2) == pytest.approx(abs(PHI - 1.5))
    assert diophantine_truth((1, PHI), 5) == pytest.approx(abs(PHI - 8 / 5))
    assert diophantine_truth((2, 2 * PHI), 5) == pytest.approx(abs(PHI - 8 / 5))


def test_period_window():
    lo, hi = period_window(1.0, 2, 100)
    assert lo == pytest.approx(4 * 0.99)
    assert hi == pytest.approx(4 * 1.01)


def test_grid_is_upper_bound_for_continuous():
    cont = recover_details((1.0, PHI), 3, 150)
    for n in (2, 9, 33):
        assert diophantine_recover((1.0, PHI), 3, 150, grid_size=n) >= cont.value - 1e-12


def test_grid_mode_matches_literal_evaluation():
    for q in (1, 2, 3):
        fast = diophantine_recover((1.0, PHI), q, 60, grid_size=9)
        slow = recover_bruteforce((1.0, PHI), q, 60, grid_size=9)
        assert fast == pytest.approx(slow, rel=1e-9)


def test_recovery_details_consistent():
    r = recover_details((1.0, HALF_PI), 2, 300)
    lo, hi = period_window(1.0, 2, 300)
    assert lo * (1 - 1e-12) <= r.rho_prime <= hi * (1 + 1e-12)
    assert r.value == pytest.approx(300 * r.min_distance)
    assert 0.8 <= r.ratio <= 1.2


def test_recovery_rejects():
    with pytest.raises(ValueError):
        recover_details((-1.0, PHI), 2, 100)
    with pytest.raises(ValueError):
        recover_details((1.0, PHI), 0, 100)
    with pytest.raises(ValueError):
        recover_details((1.0, PHI), 2, 100, grid_size=1)


def test_recovery_workers_agree():
    a = recover_details((1.0, PHI), 3, 300, workers=1)
    b = recover_details((1.0, PHI), 3, 300, workers=2)
    assert a == b
