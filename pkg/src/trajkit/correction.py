"""Marker-based GPS track correction and noise analysis.

A small number of hand-placed, trusted markers regenerate a full corrected
track: a natural cubic spline per coordinate, parameterized by timestamp,
passes through every marker exactly and is twice continuously
differentiable at interior markers. Time parameterization (rather than
arc length) keeps the corrected track's instantaneous speeds meaningful.

The noise analysis measures each track point's distance to the nearest
road centerline segment, summarized as a histogram.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geodesy import PlanePoint
from .trajectory import Trajectory


@dataclass(frozen=True)
class Marker:
    """A trusted position at a known instant, placed by an annotator."""

    timestamp_ms: int
    position: PlanePoint


@dataclass(frozen=True)
class Centerline:
    """A road-center polyline in plane meters."""

    polyline: np.ndarray  # (k, 2), k >= 2

    def __post_init__(self):
        pts = np.asarray(self.polyline, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise ValueError(f"centerline needs an (k>=2, 2) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("centerline points must be finite")
        if np.any(np.all(pts[1:] == pts[:-1], axis=1)):
            raise ValueError("consecutive centerline points must be distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "polyline", pts)


class NaturalCubicSpline:
    """Interpolating cubic spline with zero second derivative at the ends.

    Solves the standard tridiagonal system for the knot second derivatives
    (Thomas algorithm) and evaluates piecewise. Knot values may be vectors;
    each component is splined independently. With two knots the spline
    degenerates to the straight line between them.
    """

    def __init__(self, knots_t: np.ndarray, knots_y: np.ndarray):
        t = np.asarray(knots_t, dtype=np.float64)
        y = np.asarray(knots_y, dtype=np.float64)
        if t.ndim != 1 or len(t) < 2:
            raise ValueError(f"need at least 2 knots, got {t.shape}")
        if np.any(np.diff(t) <= 0):
            raise ValueError("knot parameters must be strictly increasing")
        if y.ndim == 1:
            y = y[:, None]
        if len(y) != len(t):
            raise ValueError(f"{len(t)} knot parameters but {len(y)} values")
        self.t = t
        self.y = y
        self.m2 = self._solve_second_derivatives(t, y)

    @staticmethod
    def _solve_second_derivatives(t: np.ndarray, y: np.ndarray) -> np.ndarray:
        n = len(t)
        m2 = np.zeros_like(y)
        if n == 2:
            return m2
        h = np.diff(t)  # (n-1,)
        # Tridiagonal system for interior second derivatives; natural
        # boundary pins the first and last to zero.
        diag = 2.0 * (h[:-1] + h[1:])  # (n-2,)
        lower = h[:-1].copy()
        upper = h[1:].copy()
        slopes = np.diff(y, axis=0) / h[:, None]
        rhs = 6.0 * (slopes[1:] - slopes[:-1])  # (n-2, d)
        # Thomas forward sweep
        for i in range(1, n - 2):
            w = lower[i] / diag[i - 1]
            diag[i] -= w * upper[i - 1]
            rhs[i] -= w * rhs[i - 1]
        sol = np.empty_like(rhs)
        sol[-1] = rhs[-1] / diag[-1]
        for i in range(n - 4, -1, -1):
            sol[i] = (rhs[i] - upper[i] * sol[i + 1]) / diag[i]
        m2[1:-1] = sol
        return m2

    def __call__(self, query_t: np.ndarray) -> np.ndarray:
        q = np.asarray(query_t, dtype=np.float64)
        if np.any(q < self.t[0]) or np.any(q > self.t[-1]):
            raise ValueError(
                f"query outside knot span [{self.t[0]}, {self.t[-1]}]"
            )
        idx = np.clip(np.searchsorted(self.t, q, side="right") - 1, 0, len(self.t) - 2)
        t0 = self.t[idx]
        t1 = self.t[idx + 1]
        h = (t1 - t0)[:, None]
        a = ((t1 - q)[:, None]) / h
        b = ((q - t0)[:, None]) / h
        y0, y1 = self.y[idx], self.y[idx + 1]
        m0, m1 = self.m2[idx], self.m2[idx + 1]
        return (
            a * y0
            + b * y1
            + ((a**3 - a) * m0 + (b**3 - b) * m1) * h**2 / 6.0
        )

    def second_derivative(self, query_t: np.ndarray) -> np.ndarray:
        """Exact second derivative of the piecewise cubic (linear per segment)."""
        q = np.asarray(query_t, dtype=np.float64)
        idx = np.clip(np.searchsorted(self.t, q, side="right") - 1, 0, len(self.t) - 2)
        t0, t1 = self.t[idx], self.t[idx + 1]
        h = (t1 - t0)[:, None]
        a = ((t1 - q)[:, None]) / h
        b = ((q - t0)[:, None]) / h
        return a * self.m2[idx] + b * self.m2[idx + 1]


def spline_correct(markers, query_timestamps) -> Trajectory:
    """Regenerate a corrected track through the markers at the query instants.

    Markers must be strictly increasing in time and the queries must lie
    within the marker span; querying a marker timestamp returns its
    position exactly.
    """
    markers = list(markers)
    if len(markers) < 2:
        raise ValueError(f"need at least 2 markers to interpolate, got {len(markers)}")
    t = np.array([m.timestamp_ms for m in markers], dtype=np.float64)
    if np.any(np.diff(t) <= 0):
        raise ValueError("marker timestamps must be strictly increasing")
    y = np.array([[m.position.x, m.position.y] for m in markers], dtype=np.float64)
    q = np.asarray(query_timestamps, dtype=np.int64)
    if q.ndim != 1 or len(q) < 1:
        raise ValueError("need at least one query timestamp")
    if q[0] < t[0] or q[-1] > t[-1]:
        raise ValueError(
            f"query timestamps [{q[0]}, {q[-1]}] outside marker span [{int(t[0])}, {int(t[-1])}]"
        )
    spline = NaturalCubicSpline(t, y)
    return Trajectory(q, spline(q.astype(np.float64)))


def snap_timestamp(raw_timestamps: np.ndarray, timestamp_ms: int) -> int:
    """Nearest raw-track timestamp to ``timestamp_ms`` (earlier one on ties).

    Markers snap onto the raw sampling grid when created so the corrected
    and raw tracks stay index-aligned.
    """
    raw = np.asarray(raw_timestamps, dtype=np.int64)
    if raw.ndim != 1 or len(raw) == 0:
        raise ValueError("raw_timestamps must be a non-empty 1-D array")
    return int(raw[np.argmin(np.abs(raw - int(timestamp_ms)))])


def point_segment_distance(points: np.ndarray, seg_start: np.ndarray, seg_end: np.ndarray) -> np.ndarray:
    """Distance from each point to one segment, clamping the projection."""
    p = np.atleast_2d(np.asarray(points, dtype=np.float64))
    s = np.asarray(seg_start, dtype=np.float64)
    e = np.asarray(seg_end, dtype=np.float64)
    d = e - s
    denom = float(d @ d)
    if denom == 0.0:
        raise ValueError("segment endpoints must be distinct")
    t = np.clip(((p - s) @ d) / denom, 0.0, 1.0)
    nearest = s + t[:, None] * d
    return np.hypot(p[:, 0] - nearest[:, 0], p[:, 1] - nearest[:, 1])


def distance_to_centerline(traj: Trajectory, lines) -> np.ndarray:
    """Per-point distance to the nearest segment over all centerlines."""
    lines = list(lines)
    if not lines:
        raise ValueError("need at least one centerline")
    best = np.full(len(traj), np.inf)
    for line in lines:
        poly = line.polyline
        for i in range(len(poly) - 1):
            best = np.minimum(best, point_segment_distance(traj.points, poly[i], poly[i + 1]))
    return best


def noise_histogram(distances, bin_width: float) -> dict[int, int]:
    """Counts per [k*w, (k+1)*w) bin, keyed by bin index k; empty bins omitted."""
    if not (math.isfinite(bin_width) and bin_width > 0):
        raise ValueError(f"bin_width must be positive, got {bin_width}")
    d = np.asarray(distances, dtype=np.float64)
    if d.size == 0:
        return {}
    if np.any(d < 0) or not np.all(np.isfinite(d)):
        raise ValueError("distances must be finite and non-negative")
    idx = np.floor(d / bin_width).astype(np.int64)
    values, counts = np.unique(idx, return_counts=True)
    return {int(k): int(c) for k, c in zip(values, counts)}
