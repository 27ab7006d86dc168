"""Constructions showing the gap bound is nearly attained, and slope recovery.

Two explicit ball elements come close to the bound: a shear (1, m; 0, 1)
pushing v next to the horizontal axis, and the contraction (N, -1; 1, 0)
squeezing v toward a scaled primitive point.  The second one is what
lets the truncated orbit see inf_p |s - p/q| for the slope s of v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import List, Optional, Tuple

import numpy as np

from .ball import as_spec, ball_map, check_guard
from .geometry import period
from .numeric import UnimodularMatrix, as_rational
from .spectrum import nearest_primitive, spectrum_value


def _real(v):
    a, b = float(v[0]), float(v[1])
    if a == 0.0 and b == 0.0:
        raise ValueError("v must be nonzero")
    return a, b


def _looks_rational(v, max_den: int = 10**4) -> bool:
    a, b = v
    if a == 0 or b == 0:
        return True
    s = Fraction(b / a).limit_denominator(max_den)
    return abs(float(s) - b / a) <= 1e-15 * max(1.0, abs(b / a))


def max_int_below(T, offset: int = 2) -> int:
    """Largest integer n >= 0 with n^2 + offset <= T^2 (T compared exactly)."""
    T2 = as_rational(T) ** 2
    n = math.isqrt(max(0, math.floor(T2 - offset)))
    while (n + 1) ** 2 + offset <= T2:
        n += 1
    while n > 0 and n * n + offset > T2:
        n -= 1
    return n


@dataclass(frozen=True)
class ShearCertificate:
    gamma: UnimodularMatrix
    w: Tuple[float, float]
    dist: float
    bound: float
    slack: float
    T: float

    @property
    def holds(self) -> bool:
        # |g v - w| - D/T <= 10 D / T^2
        return self.slack <= 10.0 * self.bound / self.T


def near_optimal_shear(v, T) -> ShearCertificate:
    a, b = _real(v)
    T = float(T)
    if T < 10:
        raise ValueError("the shear construction needs T >= 10")
    if _looks_rational((a, b)):
        raise ValueError("v must have irrational slope")
    m = max_int_below(T)
    if abs(a) <= abs(b):
        gamma = UnimodularMatrix(1, m, 0, 1)
        w = (a + m * b, 0.0)
        rho = 1.0 / w[0] ** 2
    else:
        gamma = UnimodularMatrix(1, 0, m, 1)
        w = (0.0, m * a + b)
        rho = 1.0 / w[1] ** 2
    gv = gamma((a, b))
    dist = math.hypot(gv[0] - w[0], gv[1] - w[1])
    bound = spectrum_value((a, b), rho).value / T
    return ShearCertificate(gamma, w, dist, bound, dist - bound, T)


@dataclass(frozen=True)
class ContractionCertificate:
    N: int
    gamma: UnimodularMatrix
    w0: Tuple[float, float]
    alpha: float
    lam: float
    w: Tuple[float, float]
    rho: float
    rho_prime: float
    dist: float
    D: float
    dist_ok: bool
    period_ok: bool

    @property
    def holds(self) -> bool:
        return self.dist_ok and self.period_ok


def _w0_numerator(a: float, b: float, q: int) -> int:
    """Integer n coprime to q minimising |n - q b / |a||.

    sqrt(rho) w0 = (q sign(a), n) is then the nearest primitive point with
    that first coordinate.
    """
    target = q * b / abs(a)
    base = math.floor(target)
    best = None
    for k in range(0, q + 2):
        for n in (base - k, base + 1 + k):
            if math.gcd(n, q) != 1:
                continue
            key = (abs(n - target), n)
            if best is None or key < best:
                best = key
        if best is not None and best[0] < k + 1:
            break
    return best[1]


def contracting_approx(v, q: int, T, eps: float) -> ContractionCertificate:
    a, b = _real(v)
    q = int(q)
    T = float(T)
    if a == 0:
        raise ValueError("first coordinate must be nonzero")
    if q < 2:
        raise ValueError("q must be > 1")
    if not eps > 0:
        raise ValueError("eps must be positive")
    rho = q * q / (a * a)
    n = _w0_numerator(a, b, q)
    b0 = abs(a) * n / q
    w0 = (a, b0)
    N = max_int_below(T)
    # the system alpha w0 - v = lam (1, N) is singular when N a = b0
    while N > 0 and N * a - b0 == 0:
        N -= 1
    gamma = UnimodularMatrix(N, -1, 1, 0)
    denom = N * a - b0
    alpha = (N * a - b) / denom
    lam = a * (b - b0) / denom
    w = gamma((alpha * w0[0], alpha * w0[1]))
    gv = gamma((a, b))
    dist = math.hypot(w[0] - gv[0], w[1] - gv[1])
    rho_prime = rho / alpha**2
    D = spectrum_value((a, b), rho).value
    dist_ok = dist <= (1 + eps) * D / T
    period_ok = abs(rho_prime / rho - 1) <= 2 * (1 + eps) * D / (abs(a) * T)
    return ContractionCertificate(N, gamma, w0, alpha, lam, w, rho, rho_prime, dist, D,
                                  dist_ok, period_ok)


# ---------------------------------------------------------------------------
# recovery of inf_p |s - p/q|


def diophantine_truth(v, q: int) -> float:
    a, b = _real(v)
    s = b / a
    return abs(s - round(q * s) / q)


def period_window(a: float, q: int, T: float) -> Tuple[float, float]:
    """rho' with |a^2 rho' / q^2 - 1| <= 2 / (q T)."""
    rho = q * q / (a * a)
    h = 2.0 / (q * T)
    return rho * (1 - h), rho * (1 + h)


@dataclass(frozen=True)
class RecoveryResult:
    value: float
    truth: float
    min_distance: float
    gamma: Optional[UnimodularMatrix]
    direction: Optional[Tuple[int, int]]
    rho_prime: float

    @property
    def ratio(self) -> float:
        return self.value / self.truth


def _segment_candidates(v, s_lo: float, s_hi: float, reach: float) -> List[Tuple[int, int]]:
    """Primitive m such that some point m / s, s in [s_lo, s_hi], is within ``reach`` of v."""
    a, b = v
    cx, cy = 0.5 * (s_lo + s_hi) * a, 0.5 * (s_lo + s_hi) * b
    half = s_hi * reach + 0.5 * (s_hi - s_lo) * math.hypot(a, b) + 1
    out = []
    for p in range(math.floor(cx - half), math.ceil(cx + half) + 1):
        for q in range(math.floor(cy - half), math.ceil(cy + half) + 1):
            if math.gcd(p, q) != 1:
                continue
            if _segment_dist(v, (p, q), 1 / s_hi, 1 / s_lo) <= reach:
                out.append((p, q))
    return out


def _segment_dist(x, z, t_lo, t_hi) -> float:
    zz = z[0] * z[0] + z[1] * z[1]
    t = min(max((x[0] * z[0] + x[1] * z[1]) / zz, t_lo), t_hi)
    return math.hypot(x[0] - t * z[0], x[1] - t * z[1])


def _pullback_block(rows, v, m, taus, t_lo, t_hi):
    """Smallest |g v - tau g m| in a block, tau on the grid or the whole interval."""
    A, B, C, Dd = (rows[:, i].astype(np.float64) for i in range(4))
    x0, x1 = A * v[0] + B * v[1], C * v[0] + Dd * v[1]
    z0, z1 = A * m[0] + B * m[1], C * m[0] + Dd * m[1]
    if rows.shape[0] == 0:
        return math.inf, None, None
    if taus is None:
        t = np.clip((x0 * z0 + x1 * z1) / (z0 * z0 + z1 * z1), t_lo, t_hi)
        d2 = (x0 - t * z0) ** 2 + (x1 - t * z1) ** 2
        i = int(np.argmin(d2))
        return float(d2[i]), tuple(int(x) for x in rows[i]), float(t[i])
    best = (math.inf, None, None)
    for t in taus:
        d2 = (x0 - t * z0) ** 2 + (x1 - t * z1) ** 2
        i = int(np.argmin(d2))
        if d2[i] < best[0]:
            best = (float(d2[i]), tuple(int(x) for x in rows[i]), float(t))
    return best


def recover_details(v, q: int, T, grid_size: Optional[int] = None,
                    workers: int = 1) -> RecoveryResult:
    """(T/a) * inf{ d(ball . v, P(rho')) : rho' in the period window }.

    With ``grid_size`` the window is replaced by that many equally spaced
    periods (endpoints included); otherwise the infimum is taken over the
    whole window.  A point of P(rho') within distance r of g v pulls back
    under g to a point u with |v - u| <= T r, because every ball element
    has operator norm at most T.  So only the few primitive directions m
    whose scaled copies pass near v need to be scanned, and for each the
    orbit minimum is one vectorised pass over the ball.
    """
    a, b = _real(v)
    if not a > 0:
        raise ValueError("first coordinate must be positive")
    q = int(q)
    if q < 1:
        raise ValueError("q must be >= 1")
    T = float(T)
    check_guard(as_spec(T))
    lo, hi = period_window(a, q, T)
    if grid_size is not None:
        if grid_size < 2:
            raise ValueError("grid_size must be >= 2")
        rhos = np.linspace(lo, hi, int(grid_size))
        taus = 1.0 / np.sqrt(rhos)
    else:
        taus = None
    s_lo, s_hi = math.sqrt(lo), math.sqrt(hi)
    t_lo, t_hi = 1 / s_hi, 1 / s_lo

    reach = 2.0 * spectrum_value((a, b), q * q / (a * a)).value + 1.0 / T
    while True:
        cands = _segment_candidates((a, b), s_lo, s_hi, reach)
        best = (math.inf, None, None, None)
        for m in cands:
            fn = partial(_pullback_block, v=(a, b), m=m, taus=taus, t_lo=t_lo, t_hi=t_hi)
            for d2, row, t in ball_map(T, fn, workers=workers):
                if d2 < best[0]:
                    best = (d2, row, t, m)
        dmin = math.sqrt(best[0])
        # every u farther than reach from v gives distance > reach / T
        if dmin * T <= reach:
            break
        reach *= 2.0
    d2, row, t, m = best
    return RecoveryResult(
        value=T / a * dmin,
        truth=diophantine_truth((a, b), q),
        min_distance=dmin,
        gamma=UnimodularMatrix(*row),
        direction=m,
        rho_prime=1.0 / (t * t),
    )


def diophantine_recover(v, q: int, T, grid_size: Optional[int] = None,
                        workers: int = 1) -> float:
    return recover_details(v, q, T, grid_size=grid_size, workers=workers).value


def recover_bruteforce(v, q: int, T, grid_size: int) -> float:
    """Literal evaluation on a rho' grid: every orbit point, every grid period.

    d(x, P(rho')) = dist(sqrt(rho') x, Z^2_prim) / sqrt(rho').  Small T only.
    """
    from .ball import ball_array
    from .spectrum import nearest_primitive_many

    a, b = _real(v)
    T = float(T)
    rows = ball_array(T).astype(np.float64)
    X = np.stack([rows[:, 0] * a + rows[:, 1] * b, rows[:, 2] * a + rows[:, 3] * b], axis=1)
    lo, hi = period_window(a, q, T)
    best = math.inf
    for rho in np.linspace(lo, hi, int(grid_size)):
        s = math.sqrt(rho)
        _, d = nearest_primitive_many(X * s)
        best = min(best, float(d.min()) / s)
    return T / a * best
