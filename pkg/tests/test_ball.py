import itertools
from fractions import Fraction

import numpy as np
import pytest

from lattice_gaps.ball import (
    BallSpec,
    GuardError,
    ball_array,
    blocks,
    count_ball,
    enumerate_ball,
    enumerate_ball_naive,
)
from lattice_gaps.numeric import UnimodularMatrix


def _scan_cube(spec, M):
    """All det-1 integer matrices with entries in [-M, M] inside the ball."""
    out = set()
    for a, b, c, d in itertools.product(range(-M, M + 1), repeat=4):
        if a * d - b * c == 1 and a * a + b * b + c * c + d * d <= spec.T_sq:
            out.add(UnimodularMatrix(a, b, c, d))
    return out


def test_below_identity_norm_is_empty():
    assert list(enumerate_ball(BallSpec(Fraction(196, 100)))) == []
    assert count_ball(BallSpec(Fraction(196, 100))) == 0


def test_radius_sqrt2():
    spec = BallSpec(2)
    expected = {
        UnimodularMatrix(1, 0, 0, 1),
        UnimodularMatrix(-1, 0, 0, -1),
        UnimodularMatrix(0, 1, -1, 0),
        UnimodularMatrix(0, -1, 1, 0),
    }
    assert _scan_cube(spec, 2) == expected
    got = list(enumerate_ball(spec))
    assert set(got) == expected
    assert len(got) == 4
    assert count_ball(spec) == 4
    assert len(list(enumerate_ball_naive(spec))) == 4


@pytest.mark.parametrize("T", [3, 5])
def test_fast_matches_cube_scan(T):
    spec = BallSpec.from_radius(T)
    assert set(enumerate_ball(spec)) == _scan_cube(spec, T)


@pytest.mark.parametrize("T_sq", [1, 2, 4, 9, 25, 64, 144, 400, Fraction(101, 4), 50])
def test_fast_matches_naive(T_sq):
    spec = BallSpec(T_sq)
    assert list(enumerate_ball(spec)) == list(enumerate_ball_naive(spec))


def test_naive_small_cases():
    assert list(enumerate_ball_naive(BallSpec.from_radius(1))) == []
    with pytest.raises(GuardError):
        list(enumerate_ball_naive(BallSpec.from_radius(65)))


@pytest.mark.parametrize("T", [100, 200, 400])
def test_quadratic_growth(T):
    ratio = count_ball(BallSpec.from_radius(2 * T)) / count_ball(BallSpec.from_radius(T))
    assert 3.5 <= ratio <= 4.5


@pytest.mark.parametrize("T", [2, 7, 13, 20])
def test_closed_under_inverse_and_negation(T):
    s = set(enumerate_ball(BallSpec.from_radius(T)))
    assert {g.inverse() for g in s} == s
    assert {-g for g in s} == s


def test_lexicographic_without_duplicates():
    arr = ball_array(BallSpec.from_radius(60))
    rows = [tuple(r) for r in arr.tolist()]
    assert rows == sorted(rows)
    assert len(set(rows)) == len(rows) == count_ball(BallSpec.from_radius(60))
    assert np.all(arr[:, 0] * arr[:, 3] - arr[:, 1] * arr[:, 2] == 1)
    assert np.all((arr * arr).sum(axis=1) <= 3600)


def test_block_layout_independent_of_workers():
    spec = BallSpec.from_radius(700)
    assert len(blocks(spec)) > 1
    serial = ball_array(spec, workers=1)
    parallel = ball_array(spec, workers=2)
    assert serial.tobytes() == parallel.tobytes()
    assert count_ball(spec, workers=2) == len(serial)


def test_guards(monkeypatch):
    with pytest.raises(OverflowError):
        count_ball(BallSpec.from_radius(20_000))
    monkeypatch.setenv("LATTICE_GAPS_MAX_T", "50")
    with pytest.raises(GuardError):
        count_ball(BallSpec.from_radius(51))
    assert count_ball(BallSpec.from_radius(50)) > 0


def test_spec_validation():
    with pytest.raises(ValueError):
        BallSpec(0)
    assert BallSpec.from_radius("1.4").T_sq == Fraction(49, 25)
    assert BallSpec(2).contains(UnimodularMatrix(0, 1, -1, 0))
