"""Exact 2x2 matrix and vector arithmetic over Z and Q.

Entries are plain Python ints or ``fractions.Fraction``; both are
arbitrary precision, so products never wrap around.  Vectors are plain
2-tuples (of Fractions for rational points, of floats for real points).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Tuple, Union

Scalar = Union[int, Fraction]
Vec2 = Tuple


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions, decimal strings and floats to an exact Fraction.

    Floats are converted from their exact binary value.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def vec_q(x, y) -> Tuple[Fraction, Fraction]:
    return as_rational(x), as_rational(y)


def norm_sq(v) -> Scalar:
    return v[0] * v[0] + v[1] * v[1]


@dataclass(frozen=True, slots=True)
class Mat2:
    """2x2 matrix (a b; c d), row-major, with int or Fraction entries."""

    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    def det(self) -> Scalar:
        return self.a * self.d - self.b * self.c

    def norm_sq(self) -> Scalar:
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def is_integral(self) -> bool:
        return all(_is_int(x) for x in self.entries())

    def entries(self) -> Tuple[Scalar, Scalar, Scalar, Scalar]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return mat_mul(self, other)

    def __neg__(self) -> "Mat2":
        return type(self)(-self.a, -self.b, -self.c, -self.d)

    def __call__(self, v):
        return mat_apply(self, v)


@dataclass(frozen=True, slots=True)
class UnimodularMatrix(Mat2):
    """Integer matrix of determinant exactly 1, i.e. an element of SL(2,Z)."""

    def __post_init__(self):
        for x in self.entries():
            if not _is_int(x):
                raise ValueError(f"SL(2,Z) entries must be integers, got {x!r}")
        # normalise integral Fractions to int
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.det() != 1:
            raise ValueError(f"determinant is {self.det()}, not 1: {self.entries()}")

    def inverse(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.d, -self.b, -self.c, self.a)


def _is_int(x) -> bool:
    if isinstance(x, bool):
        return False
    if isinstance(x, int):
        return True
    return isinstance(x, Fraction) and x.denominator == 1


def mat_mul(x: Mat2, y: Mat2) -> Mat2:
    """Exact product x*y.

    The result is a UnimodularMatrix when both factors are; otherwise a
    plain Mat2.
    """
    entries = (
        x.a * y.a + x.b * y.c,
        x.a * y.b + x.b * y.d,
        x.c * y.a + x.d * y.c,
        x.c * y.b + x.d * y.d,
    )
    if isinstance(x, UnimodularMatrix) and isinstance(y, UnimodularMatrix):
        return UnimodularMatrix(*entries)
    return Mat2(*entries)


def mat_apply(g: Mat2, v):
    """(a x + b y, c x + d y); exact for rational v, float for real v."""
    x, y = v
    return (g.a * x + g.b * y, g.c * x + g.d * y)


def frobenius_norm_sq(g: Mat2) -> Scalar:
    return g.norm_sq()
