"""Periods and heights of rational-slope points, and the horocycle section.

A nonzero rational point v is written uniquely as v = t*(p, q) with
t > 0 and gcd(p, q) = 1.  Its period is 1/t^2 and its height is
sqrt(p^2 + q^2); the two are tied together by rho(v)*|v|^2 = h(v)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .numeric import Mat2, UnimodularMatrix, as_rational, mat_mul, norm_sq, vec_q

# rotation by a quarter turn; used to move the vertical axis onto the horizontal one
ROT = UnimodularMatrix(0, -1, 1, 0)


@dataclass(frozen=True)
class PrimitiveDecomposition:
    t: Fraction
    p: int
    q: int

    @property
    def rho(self) -> Fraction:
        return 1 / (self.t * self.t)

    @property
    def height_sq(self) -> int:
        return self.p * self.p + self.q * self.q

    def point(self):
        return (self.t * self.p, self.t * self.q)


def primitive_decompose(v) -> PrimitiveDecomposition:
    x, y = vec_q(*v)
    if x == 0 and y == 0:
        raise ValueError("zero vector has no primitive decomposition")
    # t = gcd of the coordinates in Q: gcd(numerators) / lcm(denominators)
    den = math.lcm(x.denominator, y.denominator)
    X, Y = int(x * den), int(y * den)
    g = math.gcd(X, Y)
    return PrimitiveDecomposition(Fraction(g, den), X // g, Y // g)


def period(v) -> Fraction:
    return primitive_decompose(v).rho


def height_sq(v) -> int:
    return primitive_decompose(v).height_sq


def height(v) -> float:
    return math.sqrt(height_sq(v))


def tautological_identity(v) -> bool:
    """Check rho(v)*|v|^2 == h(v)^2 exactly."""
    dec = primitive_decompose(v)
    return dec.rho * norm_sq(vec_q(*v)) == dec.height_sq


def in_primitive_set(w, rho) -> bool:
    """Exact membership of a rational point w in P(rho) = rho^(-1/2) * (Z^2 primitive).

    Holds iff period(w) == rho.
    """
    x, y = vec_q(*w)
    if x == 0 and y == 0:
        return False
    return period((x, y)) == as_rational(rho)


def section(v) -> Mat2:
    """(x, 0; y, 1/x), a matrix of determinant 1 with first column v."""
    x, y = vec_q(*v)
    if x == 0:
        raise ValueError("section needs a nonzero first coordinate; use section_any")
    return Mat2(x, Fraction(0), y, 1 / x)


def section_any(v) -> Mat2:
    """Section defined on the whole punctured plane.

    On the vertical axis it is conjugated by the quarter turn:
    ROT * section(ROT^-1 v).
    """
    x, y = vec_q(*v)
    if x != 0:
        return section((x, y))
    return mat_mul(ROT, section(ROT.inverse()((x, y))))


def horocycle(s) -> Mat2:
    """u(s) = (1, s; 0, 1)."""
    return Mat2(Fraction(1), as_rational(s), Fraction(0), Fraction(1))


def period_witness(p: int, q: int) -> UnimodularMatrix:
    """Integer matrix g with g * sigma(t(p,q)) = sigma(t(p,q)) * u(1/t^2) for all t > 0.

    g = (1 - pq, p^2; -q^2, 1 + pq).  The matrix printed in the source
    derivation, (1 + pq, p^2; q^2, 1 - pq), has determinant 1 - 2p^2q^2
    and only works when pq = 0; the signs here are the determinant-one
    correction.  When p = 0 the identity holds for ``section_any``.
    """
    p, q = int(p), int(q)
    if math.gcd(p, q) != 1:
        raise ValueError(f"({p}, {q}) is not primitive")
    return UnimodularMatrix(1 - p * q, p * p, -q * q, 1 + p * q)


def check_period_witness(p: int, q: int, t) -> bool:
    """Exact check of det = 1 and the conjugation identity at scale t."""
    t = as_rational(t)
    g = period_witness(p, q)
    sig = section_any((t * p, t * q))
    lhs = mat_mul(g, sig)
    rhs = mat_mul(sig, horocycle(1 / (t * t)))
    return g.det() == 1 and lhs == rhs
