"""Orbit sums S_T(phi) = (1/T) sum_{|g| <= T} phi(g v) and their limits.

The limit is proportional to the integral of phi(w) dw / |w|, with a
constant depending on |v| and on the covolume normalisation.  Nothing
here assumes a value for that constant: comparisons are between ratios,
or between empirical constants computed for different v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial
from typing import List, Sequence, Tuple

import numpy as np
from scipy import integrate

from .ball import as_spec, ball_map, check_guard


class ExactSum:
    """Exactly rounded float accumulator (Shewchuk partials, as in math.fsum).

    Partials from different accumulators can be merged in any order
    without changing the rounded total.
    """

    def __init__(self, values=()):
        self.partials: List[float] = []
        for x in values:
            self.add(x)

    def add(self, x: float) -> None:
        x = float(x)
        out = []
        for y in self.partials:
            if abs(x) < abs(y):
                x, y = y, x
            hi = x + y
            lo = y - (hi - x)
            if lo:
                out.append(lo)
            x = hi
        out.append(x)
        self.partials = out

    def extend(self, values) -> None:
        for x in values:
            self.add(x)

    def merge(self, other: "ExactSum") -> "ExactSum":
        for x in other.partials:
            self.add(x)
        return self

    @property
    def value(self) -> float:
        return math.fsum(self.partials)


def smoothstep_bump(x, lo: float, hi: float, roll: float):
    """C^1 trapezoid: 0 outside [lo, hi], 1 on [lo + roll, hi - roll], cubic ramps."""
    x = np.asarray(x, dtype=np.float64)
    up = np.clip((x - lo) / roll, 0.0, 1.0)
    down = np.clip((hi - x) / roll, 0.0, 1.0)
    s = np.minimum(up, down)
    return s * s * (3.0 - 2.0 * s)


@dataclass(frozen=True)
class Bump:
    lo: float
    hi: float
    roll: float

    def __post_init__(self):
        if not (self.hi > self.lo and 0 < self.roll <= (self.hi - self.lo) / 2):
            raise ValueError(f"bad bump parameters {self}")

    def __call__(self, x):
        return smoothstep_bump(x, self.lo, self.hi, self.roll)

    def integral_closed_form(self) -> float:
        # each cubic ramp integrates to roll / 2
        return (self.hi - self.lo) - self.roll

    def integral(self) -> float:
        pts = [self.lo + self.roll, self.hi - self.roll]
        val, _ = integrate.quad(lambda t: float(self(t)), self.lo, self.hi, points=pts,
                                epsabs=0.0, epsrel=1e-10, limit=200)
        return val


@dataclass(frozen=True)
class TestFunction:
    """phi(w) = weight * f(|w|) * g(arg w), with arg w measured from ``theta_lo``.

    The angular bump lives on [theta_lo, theta_hi] taken counterclockwise,
    so arcs crossing the negative real axis are allowed.
    """

    r_lo: float
    r_hi: float
    theta_lo: float
    theta_hi: float
    r_roll: float = 0.1
    theta_roll: float = 0.05
    weight: float = 1.0

    __test__ = False  # not a pytest class

    def __post_init__(self):
        if not self.r_lo > 0:
            raise ValueError("radial support must stay away from 0")
        span = self.theta_hi - self.theta_lo
        if not 0 < span <= 2 * math.pi:
            raise ValueError("angular arc must have length in (0, 2 pi]")

    @property
    def radial(self) -> Bump:
        return Bump(self.r_lo, self.r_hi, self.r_roll)

    @property
    def angular(self) -> Bump:
        return Bump(0.0, self.theta_hi - self.theta_lo, self.theta_roll)

    def __call__(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64).reshape(-1, 2)
        r = np.hypot(X[:, 0], X[:, 1])
        theta = np.mod(np.arctan2(X[:, 1], X[:, 0]) - self.theta_lo, 2 * math.pi)
        return self.weight * self.radial(r) * self.angular(theta)

    def scaled(self, k: float) -> "TestFunction":
        return TestFunction(self.r_lo, self.r_hi, self.theta_lo, self.theta_hi,
                            self.r_roll, self.theta_roll, self.weight * k)

    def __add__(self, other):
        return Combination([(1.0, self)]) + other

    def __rmul__(self, k):
        return Combination([(float(k), self)])


@dataclass(frozen=True)
class Combination:
    """Finite linear combination of test functions."""

    terms: Sequence[Tuple[float, TestFunction]] = field(default_factory=list)

    def __call__(self, X):
        X = np.asarray(X, dtype=np.float64).reshape(-1, 2)
        out = np.zeros(X.shape[0])
        for k, f in self.terms:
            out = out + k * f(X)
        return out

    def __add__(self, other):
        if isinstance(other, TestFunction):
            other = Combination([(1.0, other)])
        return Combination(list(self.terms) + list(other.terms))

    def __rmul__(self, k):
        return Combination([(float(k) * c, f) for c, f in self.terms])


def target_integral(phi) -> float:
    """Integral of phi(w) dw / |w| over the punctured plane.

    In polar coordinates dw / |w| = dr dtheta, so it factors into the
    product of the one-dimensional integrals.
    """
    if isinstance(phi, Combination):
        return sum(k * target_integral(f) for k, f in phi.terms)
    return phi.weight * phi.radial.integral() * phi.angular.integral()


@dataclass(frozen=True)
class OrbitStatistic:
    T: float
    value: float
    sample_count: int


def _phi_block(rows, v, phi):
    X = np.stack([rows[:, 0] * v[0] + rows[:, 1] * v[1],
                  rows[:, 2] * v[0] + rows[:, 3] * v[1]], axis=1)
    vals = phi(X)
    nz = vals[vals != 0]
    acc = ExactSum()
    acc.extend(nz.tolist())
    return acc, int(nz.size)


def _real(v):
    v = (float(v[0]), float(v[1]))
    if v == (0.0, 0.0):
        raise ValueError("v must be nonzero")
    return v


def orbit_statistic(v, T, phi, workers: int = 1) -> OrbitStatistic:
    v = _real(v)
    spec = as_spec(T)
    check_guard(spec)
    total = ExactSum()
    count = 0
    for acc, n in ball_map(spec, partial(_phi_block, v=v, phi=phi), workers=workers):
        total.merge(acc)
        count += n
    Tf = float(T)
    return OrbitStatistic(Tf, total.value / Tf, count)


def ratio_test(v, T, phi1, phi2, workers: int = 1) -> Tuple[float, float, float]:
    s1 = orbit_statistic(v, T, phi1, workers=workers).value
    s2 = orbit_statistic(v, T, phi2, workers=workers).value
    if s2 == 0:
        raise ZeroDivisionError("phi2 sees no orbit point")
    lhs = s1 / s2
    rhs = target_integral(phi1) / target_integral(phi2)
    return lhs, rhs, abs(lhs / rhs - 1)


def constant_estimate(v, T, phi, workers: int = 1) -> float:
    """I(phi) / (|v| S_T(phi)), an empirical value of the covolume constant."""
    s = orbit_statistic(v, T, phi, workers=workers).value
    if s == 0:
        raise ZeroDivisionError("phi sees no orbit point")
    return target_integral(phi) / (math.hypot(*_real(v)) * s)


@dataclass(frozen=True)
class Annulus:
    r_min: float
    r_max: float

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max:
            raise ValueError("need 0 < r_min < r_max")


def _annulus_block(rows, v, r_min, r_max):
    x = rows[:, 0] * v[0] + rows[:, 1] * v[1]
    y = rows[:, 2] * v[0] + rows[:, 3] * v[1]
    r = np.hypot(x, y)
    return int(np.count_nonzero((r >= r_min) & (r <= r_max)))


def annulus_count(v, T, A: Annulus, workers: int = 1) -> int:
    v = _real(v)
    fn = partial(_annulus_block, v=v, r_min=A.r_min, r_max=A.r_max)
    return sum(ball_map(T, fn, workers=workers))
