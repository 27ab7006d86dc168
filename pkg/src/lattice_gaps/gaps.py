"""Gap lower bounds for truncated orbits around rational-slope points.

For g in the ball of radius T and w of rational slope, |g v - w| is at
least D_v(rho(w)) / T: otherwise g^-1 w, which has the same period as w,
would be closer to v than D_v allows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .ball import as_spec, ball_map, check_guard
from .geometry import height_sq, period, primitive_decompose
from .numeric import UnimodularMatrix, vec_q
from .spectrum import spectrum_value, spectrum_values

VERIFY_GUARD_T = 2000.0


def _real(v) -> Tuple[float, float]:
    v = (float(v[0]), float(v[1]))
    if v == (0.0, 0.0):
        raise ValueError("v must be nonzero")
    return v


def _rational_target(w):
    w = vec_q(*w)
    if w[0] == 0 and w[1] == 0:
        raise ValueError("w must be nonzero")
    return w


def _radius(T) -> float:
    T = float(T)
    if not T > 0:
        raise ValueError("T must be positive")
    return T


def gap_lower_bound(v, w, T) -> float:
    """D_v(rho(w)) / T, with rho(w) computed exactly."""
    v, w, T = _real(v), _rational_target(w), _radius(T)
    return spectrum_value(v, float(period(w))).value / T


def gap_lower_bound_from_height(v, w, T) -> float:
    """Same bound, with the period obtained as h(w)^2 / |w|^2."""
    v, w, T = _real(v), _rational_target(w), _radius(T)
    rho = height_sq(w) / float(w[0] ** 2 + w[1] ** 2)
    return spectrum_value(v, rho).value / T


def simplified_gap_bound(v, w, T) -> Optional[float]:
    """|w| / (2 h(w) T), or None unless |w| >= 2 |v| h(w)."""
    v, w, T = _real(v), _rational_target(w), _radius(T)
    wn = math.hypot(float(w[0]), float(w[1]))
    h = math.sqrt(height_sq(w))
    if wn < 2.0 * math.hypot(*v) * h:
        return None
    return wn / (2.0 * h * T)


@dataclass(frozen=True)
class GapReport:
    w: tuple
    rho_w: object
    bound: float
    observed_min: float
    argmin_gamma: UnimodularMatrix
    pass_: bool
    simplified_bound: Optional[float] = None
    simplified_pass: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return self.pass_ and self.simplified_pass is not False


def _min_distances(rows: np.ndarray, v, W: np.ndarray):
    """Per target: (smallest squared distance, its row index) within a block."""
    X = np.stack([rows[:, 0] * v[0] + rows[:, 1] * v[1],
                  rows[:, 2] * v[0] + rows[:, 3] * v[1]], axis=1)
    out = []
    for w in W:
        d2 = (X[:, 0] - w[0]) ** 2 + (X[:, 1] - w[1]) ** 2
        if d2.size == 0:
            out.append((math.inf, None))
            continue
        i = int(np.argmin(d2))
        out.append((float(d2[i]), tuple(int(x) for x in rows[i])))
    return out


def orbit_min_distances(v, ws, T, workers: int = 1):
    """Exact-order minimum of |g v - w| over the ball, for each target w.

    Returns a list of (distance, argmin row).  Ties keep the first row in
    lexicographic ball order.
    """
    v = _real(v)
    W = np.array([[float(w[0]), float(w[1])] for w in ws], dtype=np.float64)
    best = [(math.inf, None)] * len(W)
    for part in ball_map(T, partial(_min_distances, v=v, W=W), workers=workers):
        best = [p if p[0] < b[0] else b for b, p in zip(best, part)]
    return [(math.sqrt(d2), row) for d2, row in best]


def verify_gaps(v, ws: Sequence, T, workers: int = 1) -> List[GapReport]:
    """Check the gap bound for several targets with a single pass over the ball."""
    v, T = _real(v), _radius(T)
    check_guard(as_spec(T), VERIFY_GUARD_T)
    targets = [_rational_target(w) for w in ws]
    mins = orbit_min_distances(v, targets, T, workers=workers)
    reports = []
    for w, (dist, row) in zip(targets, mins):
        bound = gap_lower_bound(v, w, T)
        wn = math.hypot(float(w[0]), float(w[1]))
        tol = 1e-12 * (1.0 + wn)
        simple = simplified_gap_bound(v, w, T)
        reports.append(GapReport(
            w=w,
            rho_w=period(w),
            bound=bound,
            observed_min=dist,
            argmin_gamma=UnimodularMatrix(*row) if row is not None else None,
            pass_=dist >= bound - tol,
            simplified_bound=simple,
            simplified_pass=None if simple is None else dist >= simple - tol,
        ))
    return reports


def verify_gap(v, w, T, workers: int = 1) -> GapReport:
    return verify_gaps(v, [w], T, workers=workers)[0]


# ---------------------------------------------------------------------------
# (radius, slope) picture around a rational line


@dataclass(frozen=True)
class GapCurve:
    radius_grid: np.ndarray
    upper: np.ndarray
    lower: np.ndarray
    T: float
    line: Tuple[int, int]
    # D_v(rho_r) / T without the radius conversion
    raw: np.ndarray


def _line(line) -> Tuple[int, int, float]:
    p, q = int(line[0]), int(line[1])
    dec = primitive_decompose((p, q))
    if dec.t != 1:
        raise ValueError(f"line direction ({p}, {q}) must be primitive")
    return p, q, math.hypot(p, q)


def slope_gap(v, T, line, radii) -> np.ndarray:
    """Half-width g(r) = D_v(h^2 / r^2) / (T r) of the empty wedge at radius r."""
    p, q, h = _line(line)
    r = np.asarray(radii, dtype=np.float64)
    return spectrum_values(v, (h * h) / (r * r)) / (float(T) * r)


def gap_region_curves(v, T, line, radius_grid) -> GapCurve:
    r = np.asarray(radius_grid, dtype=np.float64)
    if r.ndim != 1 or r.size == 0 or np.any(r <= 0) or np.any(np.diff(r) <= 0):
        raise ValueError("radius grid must be positive and strictly increasing")
    T = _radius(T)
    g = slope_gap(v, T, line, r)
    p, q, h = _line(line)
    raw = spectrum_values(v, (h * h) / (r * r)) / T
    return GapCurve(r, g, -g, T, (p, q), raw)


def line_coordinates(X: np.ndarray, line):
    """(radius, slope deviation) of points relative to the line R(p, q).

    The radius is the length of the orthogonal projection onto the line
    and the deviation is the tangent of the angle to the line; for the
    horizontal axis these are |x| and y / x.
    """
    p, q, h = _line(line)
    s = (X[:, 0] * p + X[:, 1] * q) / h
    perp = (X[:, 1] * p - X[:, 0] * q) / h
    with np.errstate(divide="ignore", invalid="ignore"):
        dev = perp / s
    return np.abs(s), dev


@dataclass
class LineScan:
    radius: np.ndarray
    slope: np.ndarray
    gap: np.ndarray
    gammas: np.ndarray
    inside: np.ndarray
    total_points: int

    @property
    def violations(self) -> int:
        return int(self.inside.sum())


def _scan_block(rows: np.ndarray, v, T, line, band):
    p, q, h = _line(line)
    X = np.stack([rows[:, 0] * v[0] + rows[:, 1] * v[1],
                  rows[:, 2] * v[0] + rows[:, 3] * v[1]], axis=1)
    r, dev = line_coordinates(X, line)
    vn = math.hypot(*v)
    ok = r > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        # D_v(rho) <= |v| + 1/sqrt(rho) caps g(r)
        cap = vn / (T * r) + 1.0 / (h * T)
    near = ok & ((np.abs(dev) < cap) | (np.abs(dev) <= band))
    idx = np.flatnonzero(near)
    g = np.zeros(idx.size)
    if idx.size:
        g = slope_gap(v, T, (p, q), r[idx])
    inside = np.abs(dev[idx]) < g * (1.0 - 1e-9)
    keep = inside | (np.abs(dev[idx]) <= band)
    sel = idx[keep]
    return (r[sel], dev[sel], g[keep], rows[sel], inside[keep], rows.shape[0])


def scan_line(v, T, line, band: float, workers: int = 1) -> LineScan:
    """Every orbit point within ``band`` of the line, plus every point inside the gap.

    A point is inside when |slope| < g(radius); the gap theorem says this
    never happens.
    """
    v, T = _real(v), _radius(T)
    check_guard(as_spec(T), VERIFY_GUARD_T)
    parts = list(ball_map(T, partial(_scan_block, v=v, T=T, line=tuple(line), band=float(band)),
                          workers=workers))
    if not parts:
        z = np.zeros(0)
        return LineScan(z, z, z, np.zeros((0, 4), dtype=np.int64), np.zeros(0, dtype=bool), 0)
    cat = [np.concatenate([pt[i] for pt in parts]) for i in range(5)]
    return LineScan(*cat, total_points=sum(pt[5] for pt in parts))


# ---------------------------------------------------------------------------
# orbit scatter


@dataclass(frozen=True)
class Rect:
    x0: float
    y0: float
    x1: float
    y1: float

    def mask(self, X):
        return (X[:, 0] >= self.x0) & (X[:, 0] <= self.x1) & (X[:, 1] >= self.y0) & (X[:, 1] <= self.y1)


@dataclass(frozen=True)
class AnnulusClip:
    r_min: float
    r_max: float

    def mask(self, X):
        r = np.hypot(X[:, 0], X[:, 1])
        return (r >= self.r_min) & (r <= self.r_max)


def _scatter_block(rows, v, clip):
    X = np.stack([rows[:, 0] * v[0] + rows[:, 1] * v[1],
                  rows[:, 2] * v[0] + rows[:, 3] * v[1]], axis=1)
    m = clip.mask(X)
    return X[m], rows[m]


def orbit_scatter_arrays(v, T, clip, workers: int = 1):
    """Orbit points g v inside the clip region and their g, in ball order."""
    v = _real(v)
    parts = list(ball_map(T, partial(_scatter_block, v=v, clip=clip), workers=workers))
    if not parts:
        return np.zeros((0, 2)), np.zeros((0, 4), dtype=np.int64)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def orbit_scatter(v, T, clip, workers: int = 1):
    X, G = orbit_scatter_arrays(v, T, clip, workers=workers)
    return [((float(x[0]), float(x[1])), UnimodularMatrix(*g)) for x, g in zip(X, G.tolist())]
