"""Distance to the primitive lattice and the spectrum of periods.

D_v(rho) is the distance from v to P(rho) = rho^(-1/2) * Z^2_prim, which
rescales to (1/sqrt(rho)) * dist(sqrt(rho) v, Z^2_prim).

Equidistant primitive points are ranked by ``tie_key``: smallest |p|,
then smallest |q|, then nonnegative coordinates first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np


def tie_key(p: int, q: int) -> Tuple[int, int, bool, bool]:
    return (abs(p), abs(q), p < 0, q < 0)


def nearest_primitive(x) -> Tuple[Tuple[int, int], float]:
    """Closest integer point with coprime coordinates to the real point x.

    Scans square rings of integer points around round(x).  Every point of
    ring k is at distance >= k - 1/2 from x, so the scan stops as soon as
    that exceeds the best distance found.  Rings have to be unbounded:
    near (n, 0) with n composite the nearest primitive point can be more
    than 1 away.
    """
    x0, x1 = float(x[0]), float(x[1])
    if not (math.isfinite(x0) and math.isfinite(x1)):
        raise ValueError("point must be finite")
    c0, c1 = round(x0), round(x1)
    best = None
    best_d2 = math.inf
    k = 0
    while (k - 0.5) ** 2 <= best_d2 or k == 0:
        for p, q in _ring(c0, c1, k):
            if math.gcd(p, q) != 1:
                continue
            d2 = (p - x0) ** 2 + (q - x1) ** 2
            if d2 < best_d2 or (d2 == best_d2 and tie_key(p, q) < tie_key(*best)):
                best, best_d2 = (p, q), d2
        k += 1
    return best, math.sqrt(best_d2)


def _ring(c0: int, c1: int, k: int):
    if k == 0:
        yield (c0, c1)
        return
    for i in range(-k, k + 1):
        yield (c0 + i, c1 - k)
        yield (c0 + i, c1 + k)
    for j in range(-k + 1, k):
        yield (c0 - k, c1 + j)
        yield (c0 + k, c1 + j)


_WINDOW = 2
_OFFSETS = [(i, j) for i in range(-_WINDOW, _WINDOW + 1) for j in range(-_WINDOW, _WINDOW + 1)]


def nearest_primitive_many(X: np.ndarray):
    """Vectorised nearest_primitive for an (n, 2) array.

    Returns (witness int64 (n, 2), dist float (n,)).  A 5x5 window around
    round(x) is exact whenever the best distance found is below 2.5; the
    few remaining rows fall back to the ring search.
    """
    X = np.asarray(X, dtype=np.float64).reshape(-1, 2)
    n = X.shape[0]
    C = np.rint(X).astype(np.int64)
    best = np.zeros((n, 2), dtype=np.int64)
    best_d2 = np.full(n, np.inf)
    for i, j in _OFFSETS:
        P = C[:, 0] + i
        Q = C[:, 1] + j
        ok = np.gcd(P, Q) == 1
        d2 = (P - X[:, 0]) ** 2 + (Q - X[:, 1]) ** 2
        d2 = np.where(ok, d2, np.inf)
        better = d2 < best_d2
        tie = (d2 == best_d2) & ok & _key_less(P, Q, best[:, 0], best[:, 1])
        upd = better | tie
        best[upd, 0] = P[upd]
        best[upd, 1] = Q[upd]
        best_d2 = np.where(upd, d2, best_d2)
    dist = np.sqrt(best_d2)
    for r in np.flatnonzero(~(dist < _WINDOW + 0.5)):
        w, d = nearest_primitive(X[r])
        best[r] = w
        dist[r] = d
    return best, dist


def _key_less(p, q, bp, bq):
    ap, aq, abp, abq = np.abs(p), np.abs(q), np.abs(bp), np.abs(bq)
    sp, sq, sbp, sbq = p < 0, q < 0, bp < 0, bq < 0
    return (
        (ap < abp)
        | ((ap == abp) & (aq < abq))
        | ((ap == abp) & (aq == abq) & (sp < sbp))
        | ((ap == abp) & (aq == abq) & (sp == sbp) & (sq < sbq))
    )


@dataclass(frozen=True)
class SpectrumSample:
    rho: float
    value: float
    witness: Tuple[int, int]
    scaled_point: Tuple[float, float]


def _check_v(v) -> Tuple[float, float]:
    v = (float(v[0]), float(v[1]))
    if v == (0.0, 0.0):
        raise ValueError("v must be nonzero")
    return v


def spectrum_value(v, rho) -> SpectrumSample:
    v = _check_v(v)
    rho = float(rho)
    if not rho > 0:
        raise ValueError("rho must be positive")
    s = math.sqrt(rho)
    x = (s * v[0], s * v[1])
    w, d = nearest_primitive(x)
    return SpectrumSample(rho, d / s, w, x)


def spectrum_values(v, rhos) -> np.ndarray:
    """D_v over an array of rho values (vectorised, no witnesses)."""
    v = _check_v(v)
    rhos = np.asarray(rhos, dtype=np.float64)
    if np.any(~(rhos > 0)):
        raise ValueError("rho must be positive")
    s = np.sqrt(rhos)
    _, d = nearest_primitive_many(np.stack([s * v[0], s * v[1]], axis=1))
    return d / s


def spectrum_curve(v, rho_grid: Sequence[float]) -> List[SpectrumSample]:
    grid = [float(r) for r in rho_grid]
    if not grid:
        raise ValueError("empty rho grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("rho grid must be strictly increasing")
    return [spectrum_value(v, r) for r in grid]


def lemma_regime_bound(v) -> float:
    """Largest rho with rho <= 1/(2|v|)^2, where 1/(2 sqrt rho) <= D_v(rho) <= 1/sqrt rho."""
    v = _check_v(v)
    return 1.0 / (4.0 * (v[0] ** 2 + v[1] ** 2))
