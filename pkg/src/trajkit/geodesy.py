"""Planar projection and relative-motion encoding for GPS tracks.

Positions are carried in spherical web-mercator meters (x east, y north)
so that displacements, distances and speeds reduce to plain Euclidean
math. Trajectories are interchangeably a sequence of plane points or the
sequence of per-step deltas between them; ``to_deltas``/``from_deltas``
convert between the two representations losslessly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EARTH_RADIUS_M = 6378137.0
LAT_MAX_DEG = 85.05113
LON_MAX_DEG = 180.0

X_MAX_M = math.pi * EARTH_RADIUS_M
# The latitude band is a hair wider than the exact square-map latitude, so
# the y bound is mercator_y(LAT_MAX_DEG), ~1.6 m beyond pi*R.
Y_MAX_M = EARTH_RADIUS_M * math.atanh(math.sin(math.radians(LAT_MAX_DEG)))

_BOUND_SLACK_M = 1e-6


@dataclass(frozen=True)
class GeoPoint:
    """WGS84 coordinate in degrees, restricted to the mercator validity band."""

    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError(f"geo point must be finite, got ({self.lat}, {self.lon})")
        if abs(self.lat) > LAT_MAX_DEG:
            raise ValueError(f"latitude {self.lat} outside the +/-{LAT_MAX_DEG} deg validity band")
        if abs(self.lon) > LON_MAX_DEG:
            raise ValueError(f"longitude {self.lon} outside +/-{LON_MAX_DEG} deg")


@dataclass(frozen=True)
class PlanePoint:
    """Position in web-mercator meters."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"plane point must be finite, got ({self.x}, {self.y})")
        if abs(self.x) > X_MAX_M + _BOUND_SLACK_M:
            raise ValueError(f"x={self.x} outside mercator bounds +/-{X_MAX_M}")
        if abs(self.y) > Y_MAX_M + _BOUND_SLACK_M:
            raise ValueError(f"y={self.y} outside mercator bounds +/-{Y_MAX_M}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=np.float64)


@dataclass(frozen=True)
class MotionDelta:
    """Per-step displacement in meters."""

    dx: float
    dy: float

    def __post_init__(self):
        if not (math.isfinite(self.dx) and math.isfinite(self.dy)):
            raise ValueError(f"motion delta must be finite, got ({self.dx}, {self.dy})")


def to_mercator(p: GeoPoint) -> PlanePoint:
    """Project a geographic point onto the spherical mercator plane.

    y is R * ln(tan(pi/4 + lat/2)), computed in the equivalent
    atanh-of-sine form, which is exact at the equator and keeps the
    projection strictly monotone in latitude.
    """
    x = EARTH_RADIUS_M * math.radians(p.lon)
    y = EARTH_RADIUS_M * math.atanh(math.sin(math.radians(p.lat)))
    return PlanePoint(x, y)


def from_mercator(p: PlanePoint) -> GeoPoint:
    """Invert :func:`to_mercator` analytically."""
    lon = math.degrees(p.x / EARTH_RADIUS_M)
    lat = math.degrees(math.asin(math.tanh(p.y / EARTH_RADIUS_M)))
    # Projection/inversion round trips can overshoot the band by < 1e-12 deg.
    lat = min(max(lat, -LAT_MAX_DEG), LAT_MAX_DEG)
    lon = min(max(lon, -LON_MAX_DEG), LON_MAX_DEG)
    return GeoPoint(lat, lon)


def project_latlon(lat: np.ndarray, lon: np.ndarray) -> np.ndarray:
    """Vectorized projection of degree arrays to an (n, 2) meter array."""
    lat = np.asarray(lat, dtype=np.float64)
    lon = np.asarray(lon, dtype=np.float64)
    if lat.shape != lon.shape:
        raise ValueError("lat and lon arrays must have the same shape")
    if not (np.all(np.isfinite(lat)) and np.all(np.isfinite(lon))):
        raise ValueError("lat/lon arrays must be finite")
    if np.any(np.abs(lat) > LAT_MAX_DEG):
        raise ValueError(f"latitude outside the +/-{LAT_MAX_DEG} deg validity band")
    if np.any(np.abs(lon) > LON_MAX_DEG):
        raise ValueError(f"longitude outside +/-{LON_MAX_DEG} deg")
    x = EARTH_RADIUS_M * np.radians(lon)
    y = EARTH_RADIUS_M * np.arctanh(np.sin(np.radians(lat)))
    return np.stack([x, y], axis=-1)


def unproject_xy(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized inverse of :func:`project_latlon`; returns (lat, lon) degrees."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array, got shape {pts.shape}")
    if np.any(np.abs(pts[:, 0]) > X_MAX_M + _BOUND_SLACK_M) or np.any(
        np.abs(pts[:, 1]) > Y_MAX_M + _BOUND_SLACK_M
    ):
        raise ValueError("points outside mercator bounds")
    lon = np.degrees(pts[:, 0] / EARTH_RADIUS_M)
    lat = np.degrees(np.arcsin(np.tanh(pts[:, 1] / EARTH_RADIUS_M)))
    return np.clip(lat, -LAT_MAX_DEG, LAT_MAX_DEG), np.clip(lon, -LON_MAX_DEG, LON_MAX_DEG)


def to_deltas(points: np.ndarray) -> np.ndarray:
    """Relative-motion encoding: row t of the result is point t+1 minus point t.

    ``points`` is an (n, 2) array of plane coordinates with n >= 2; the
    result has shape (n-1, 2).
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) array, got shape {pts.shape}")
    if len(pts) < 2:
        raise ValueError(f"need at least 2 points to form deltas, got {len(pts)}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    return np.diff(pts, axis=0)


def from_deltas(anchor, deltas: np.ndarray) -> np.ndarray:
    """Cumulatively apply deltas starting one step after ``anchor``.

    The anchor itself is not part of the result: output row 0 is
    ``anchor + deltas[0]``, so ``from_deltas(p[0], to_deltas(p))``
    reconstructs ``p[1:]``.
    """
    if isinstance(anchor, PlanePoint):
        anchor = anchor.as_array()
    anchor = np.asarray(anchor, dtype=np.float64)
    if anchor.shape != (2,):
        raise ValueError(f"anchor must be a single 2D point, got shape {anchor.shape}")
    if not np.all(np.isfinite(anchor)):
        raise ValueError("anchor must be finite")
    d = np.asarray(deltas, dtype=np.float64)
    if d.size == 0:
        return np.empty((0, 2), dtype=np.float64)
    if d.ndim != 2 or d.shape[1] != 2:
        raise ValueError(f"expected an (n, 2) delta array, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise ValueError("deltas must be finite")
    return anchor + np.cumsum(d, axis=0)
