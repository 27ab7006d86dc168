"""Enumeration of the norm ball {g in SL(2,Z) : a^2+b^2+c^2+d^2 <= T^2}.

The fast path works on blocks of the top row (a, b).  For coprime (a, b)
the bottom rows with ad - bc = 1 form the progression
(c, d) = (c0 + k a, d0 + k b), and the norm condition is a quadratic
inequality in k, so every block is produced with a handful of numpy
passes.  Blocks are a fixed function of T (never of the worker count),
and are emitted in lexicographic (a, b, c, d) order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, List, Tuple

import numpy as np

from .numeric import UnimodularMatrix, as_rational

# int64 intermediates stay exact up to this radius
MAX_SUPPORTED_T = 10_000
DEFAULT_GUARD_T = 4096
NAIVE_GUARD_T = 64
# target number of (a, b) pairs per block
_BLOCK_PAIRS = 1 << 19


class GuardError(RuntimeError):
    """Requested radius is beyond the configured enumeration guard."""


def guard_t() -> float:
    env = os.environ.get("LATTICE_GAPS_MAX_T")
    if env:
        return float(env)
    return float(DEFAULT_GUARD_T)


@dataclass(frozen=True)
class BallSpec:
    """Squared radius of the ball, held exactly."""

    T_sq: Fraction

    def __post_init__(self):
        object.__setattr__(self, "T_sq", as_rational(self.T_sq))
        if self.T_sq <= 0:
            raise ValueError("T_sq must be positive")

    @classmethod
    def from_radius(cls, T) -> "BallSpec":
        t = as_rational(T)
        return cls(t * t)

    @property
    def bound(self) -> int:
        """Largest admissible integer value of the squared norm."""
        return math.floor(self.T_sq)

    @property
    def T(self) -> float:
        return math.sqrt(self.T_sq)

    def contains(self, g) -> bool:
        return g.norm_sq() <= self.T_sq


def as_spec(spec_or_T) -> BallSpec:
    if isinstance(spec_or_T, BallSpec):
        return spec_or_T
    return BallSpec.from_radius(spec_or_T)


def check_guard(spec: BallSpec, limit: float | None = None) -> None:
    if spec.T_sq > MAX_SUPPORTED_T**2:
        raise OverflowError(
            f"T = {spec.T:g} exceeds the supported entry width (T <= {MAX_SUPPORTED_T})"
        )
    limit = guard_t() if limit is None else limit
    if spec.T_sq > Fraction(limit) ** 2:
        raise GuardError(
            f"T = {spec.T:g} exceeds the enumeration guard {limit:g} "
            "(set LATTICE_GAPS_MAX_T to raise it)"
        )


# ---------------------------------------------------------------------------
# block layout


def blocks(spec: BallSpec) -> List[Tuple[int, int]]:
    """Inclusive ranges of a, ascending, covering -A..A."""
    R = spec.bound
    A = math.isqrt(R)
    if R < 2:
        return []
    # pairs per unit of a is about 2*sqrt(R)
    width = max(1, _BLOCK_PAIRS // (2 * A + 1))
    out = []
    lo = -A
    while lo <= A:
        hi = min(A, lo + width - 1)
        out.append((lo, hi))
        lo = hi + 1
    return out


def _ext_gcd(a: np.ndarray, b: np.ndarray):
    """Vectorised extended Euclid: returns (g, x, y) with a*x + b*y = g."""
    old_r, r = a.copy(), b.copy()
    old_s, s = np.ones_like(a), np.zeros_like(a)
    old_t, t = np.zeros_like(a), np.ones_like(a)
    active = r != 0
    while active.any():
        q = np.zeros_like(a)
        q[active] = old_r[active] // r[active]
        old_r, r = np.where(active, r, old_r), np.where(active, old_r - q * r, r)
        old_s, s = np.where(active, s, old_s), np.where(active, old_s - q * s, s)
        old_t, t = np.where(active, t, old_t), np.where(active, old_t - q * t, t)
        active = r != 0
    return old_r, old_s, old_t


def _block_pairs(lo: int, hi: int, R: int):
    """Top rows (a, b) with a != 0, lo <= a <= hi, a^2 + b^2 <= R, in lex order."""
    a_vals = np.arange(lo, hi + 1, dtype=np.int64)
    a_vals = a_vals[a_vals != 0]
    if a_vals.size == 0:
        e = np.zeros(0, dtype=np.int64)
        return e, e
    bmax = np.array([math.isqrt(R - int(x) * int(x)) for x in a_vals], dtype=np.int64)
    counts = 2 * bmax + 1
    a = np.repeat(a_vals, counts)
    starts = np.cumsum(counts) - counts
    b = np.arange(a.size, dtype=np.int64) - np.repeat(starts, counts) - np.repeat(bmax, counts)
    return a, b


def _bottom_rows(a: np.ndarray, b: np.ndarray, R: int):
    """For each coprime top row, the base solution and admissible k-range.

    Returns (a, b, c0, d0, k_lo, k_hi) restricted to coprime pairs; k_hi < k_lo
    means no admissible bottom row.
    """
    keep = np.gcd(a, b) == 1
    a, b = a[keep], b[keep]
    g, x, y = _ext_gcd(a, b)
    # g = +-1; a*(g x) - b*(-g y) = 1
    d0 = g * x
    c0 = -g * y
    n = a * a + b * b
    m = c0 * a + d0 * b
    # shift to the solution closest to orthogonal to (a, b)
    k0 = -np.floor_divide(2 * m + n, 2 * n)
    c0 = c0 + k0 * a
    d0 = d0 + k0 * b
    m = c0 * a + d0 * b
    e = c0 * c0 + d0 * d0
    rem = R - n

    def f(k):
        return n * k * k + 2 * m * k + e - rem

    disc = m.astype(np.float64) ** 2 - n.astype(np.float64) * (e - rem).astype(np.float64)
    root = np.sqrt(np.maximum(disc, 0.0))
    nf = n.astype(np.float64)
    k_lo = np.ceil((-m - root) / nf).astype(np.int64)
    k_hi = np.floor((-m + root) / nf).astype(np.int64)
    # the float estimate can be off by one at either end
    k_lo = np.where(f(k_lo - 1) <= 0, k_lo - 1, k_lo)
    k_lo = np.where(f(k_lo) > 0, k_lo + 1, k_lo)
    k_hi = np.where(f(k_hi + 1) <= 0, k_hi + 1, k_hi)
    k_hi = np.where(f(k_hi) > 0, k_hi - 1, k_hi)
    empty = disc < 0
    k_hi = np.where(empty, k_lo - 1, k_hi)
    return a, b, c0, d0, k_lo, k_hi


def _a_zero_rows(R: int) -> np.ndarray:
    # a = 0 forces b c = -1
    dmax = math.isqrt(R - 2) if R >= 2 else -1
    if dmax < 0:
        return np.zeros((0, 4), dtype=np.int64)
    d = np.arange(-dmax, dmax + 1, dtype=np.int64)
    z = np.zeros_like(d)
    one = np.ones_like(d)
    first = np.stack([z, -one, one, d], axis=1)
    second = np.stack([z, one, -one, d], axis=1)
    return np.concatenate([first, second])


def block_count(spec: BallSpec, block: Tuple[int, int]) -> int:
    R = spec.bound
    lo, hi = block
    a, b = _block_pairs(lo, hi, R)
    *_, k_lo, k_hi = _bottom_rows(a, b, R)
    total = int(np.maximum(k_hi - k_lo + 1, 0).sum())
    if lo <= 0 <= hi and R >= 2:
        total += 2 * (2 * math.isqrt(R - 2) + 1)
    return total


def block_matrices(spec: BallSpec, block: Tuple[int, int]) -> np.ndarray:
    """All ball elements with a in the block, as an (n, 4) int64 array in lex order."""
    R = spec.bound
    lo, hi = block
    a, b = _block_pairs(lo, hi, R)
    a, b, c0, d0, k_lo, k_hi = _bottom_rows(a, b, R)
    counts = np.maximum(k_hi - k_lo + 1, 0)
    total = int(counts.sum())
    idx = np.repeat(np.arange(a.size), counts)
    j = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(counts) - counts, counts)
    aa, bb = a[idx], b[idx]
    # c increases with k when a > 0 and decreases when a < 0
    k = np.where(aa > 0, k_lo[idx] + j, k_hi[idx] - j)
    cc = c0[idx] + k * aa
    dd = d0[idx] + k * bb
    rows = np.stack([aa, bb, cc, dd], axis=1)
    if lo <= 0 <= hi:
        split = int(np.searchsorted(aa, 0))
        rows = np.concatenate([rows[:split], _a_zero_rows(R), rows[split:]])
    return rows


# ---------------------------------------------------------------------------
# map / reduce driver


def _apply_block(args):
    fn, spec, block = args
    return fn(block_matrices(spec, block))


def ball_map(spec, fn: Callable[[np.ndarray], object], workers: int = 1,
             guard: float | None = None) -> Iterator[object]:
    """Yield fn(block) for every block of the ball, in canonical block order.

    ``fn`` must be picklable when workers > 1.  Block boundaries depend
    only on the ball, so order-sensitive reductions give the same result
    for every worker count.
    """
    spec = as_spec(spec)
    check_guard(spec, guard)
    bl = blocks(spec)
    if workers <= 1 or len(bl) <= 1:
        for block in bl:
            yield fn(block_matrices(spec, block))
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_apply_block, [(fn, spec, block) for block in bl])


def iter_ball_arrays(spec, workers: int = 1, guard: float | None = None) -> Iterator[np.ndarray]:
    return ball_map(spec, _identity, workers=workers, guard=guard)


def _identity(x):
    return x


def ball_array(spec, workers: int = 1, guard: float | None = None) -> np.ndarray:
    parts = list(iter_ball_arrays(spec, workers=workers, guard=guard))
    if not parts:
        return np.zeros((0, 4), dtype=np.int64)
    return np.concatenate(parts)


# ---------------------------------------------------------------------------
# public operations


def enumerate_ball(spec, workers: int = 1) -> Iterator[UnimodularMatrix]:
    """Stream every element of the ball once, in lexicographic (a, b, c, d) order."""
    for arr in iter_ball_arrays(spec, workers=workers):
        for row in arr.tolist():
            yield UnimodularMatrix(*row)


def count_ball(spec, workers: int = 1) -> int:
    spec = as_spec(spec)
    check_guard(spec)
    bl = blocks(spec)
    if workers <= 1 or len(bl) <= 1:
        return sum(block_count(spec, block) for block in bl)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(block_count, [spec] * len(bl), bl))


def enumerate_ball_naive(spec) -> Iterator[UnimodularMatrix]:
    """Slow reference enumeration: loop over (a, b, c), solve for d."""
    spec = as_spec(spec)
    if spec.T_sq > NAIVE_GUARD_T**2:
        raise GuardError(f"naive enumeration limited to T <= {NAIVE_GUARD_T}")
    R = spec.bound
    M = math.isqrt(R)
    rng = range(-M, M + 1)
    found = []
    for a in rng:
        for b in rng:
            for c in rng:
                if a == 0:
                    if b * c != -1:
                        continue
                    for d in rng:
                        if a * a + b * b + c * c + d * d <= R:
                            found.append((a, b, c, d))
                    continue
                num = 1 + b * c
                if num % a:
                    continue
                d = num // a
                if a * a + b * b + c * c + d * d <= R:
                    found.append((a, b, c, d))
    found.sort()
    for row in found:
        yield UnimodularMatrix(*row)
