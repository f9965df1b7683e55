"""Trajectory container, uniform resampling, and window sampling.

Timestamps are integer milliseconds so grid positions compare exactly in
tests and across file round trips. A trajectory is "uniform at fps" when
its k-th timestamp equals ``first + round(k * 1000 / fps)``, which is what
:func:`resample` produces; for rates that divide 1000 ms evenly (the 5 Hz
protocol rate, 200 Hz gaze) this is a strictly constant step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(eq=False)
class Trajectory:
    """Timestamped planar track in meters. Immutable after construction."""

    timestamps: np.ndarray  # (n,) int64 milliseconds, strictly increasing
    points: np.ndarray  # (n, 2) float64 meters

    def __post_init__(self):
        ts = np.asarray(self.timestamps)
        if ts.dtype.kind == "f":
            if not np.all(np.isfinite(ts)):
                raise ValueError("timestamps must be finite")
            rounded = np.rint(ts)
            if np.any(np.abs(ts - rounded) > 1e-6):
                raise ValueError("timestamps must be integral milliseconds")
            ts = rounded
        ts = ts.astype(np.int64)
        pts = np.asarray(self.points, dtype=np.float64)
        if ts.ndim != 1:
            raise ValueError(f"timestamps must be 1-D, got shape {ts.shape}")
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"points must be an (n, 2) array, got shape {pts.shape}")
        if len(ts) != len(pts):
            raise ValueError(f"{len(ts)} timestamps but {len(pts)} points")
        if len(ts) < 1:
            raise ValueError("trajectory needs at least one sample")
        if len(ts) > 1 and np.any(np.diff(ts) <= 0):
            raise ValueError("timestamps must be strictly increasing")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        ts.setflags(write=False)
        pts.setflags(write=False)
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.timestamps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trajectory):
            return NotImplemented
        return np.array_equal(self.timestamps, other.timestamps) and np.array_equal(
            self.points, other.points
        )

    @property
    def duration_ms(self) -> int:
        return int(self.timestamps[-1] - self.timestamps[0])

    def slice(self, start: int, stop: int) -> "Trajectory":
        """Sub-trajectory over sample indices [start, stop)."""
        return Trajectory(self.timestamps[start:stop], self.points[start:stop])


@dataclass(frozen=True)
class SamplerConfig:
    """Window-cutting protocol: input/target spans, stride, and sample rate."""

    input_secs: float = 8.0
    target_secs: float = 6.0
    stride_secs: float = 2.0
    fps: float = 5.0

    def __post_init__(self):
        for name in ("input_secs", "target_secs", "stride_secs", "fps"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        for name in ("input_secs", "target_secs"):
            n = getattr(self, name) * self.fps
            if abs(n - round(n)) > 1e-9:
                raise ValueError(f"fps * {name} must be integral, got {n}")

    @property
    def input_samples(self) -> int:
        return round(self.input_secs * self.fps)

    @property
    def target_samples(self) -> int:
        return round(self.target_secs * self.fps)


@dataclass(frozen=True)
class WindowPair:
    """An (input, target) cut of a uniform trajectory.

    The target begins exactly one sample step after the input ends;
    ``anchor_time`` is the input's final timestamp (the boundary instant).
    """

    input: Trajectory
    target: Trajectory
    anchor_time: int

    def __post_init__(self):
        if self.target.timestamps[0] <= self.input.timestamps[-1]:
            raise ValueError("target must start after the input ends")
        if int(self.anchor_time) != int(self.input.timestamps[-1]):
            raise ValueError("anchor_time must be the input's final timestamp")


def grid_timestamps(start_ms: int, count: int, fps: float) -> np.ndarray:
    """The integer-millisecond sampling grid starting at ``start_ms``."""
    ks = np.arange(count, dtype=np.float64)
    return (int(start_ms) + np.rint(ks * 1000.0 / fps)).astype(np.int64)


def is_uniform(traj: Trajectory, fps: float) -> bool:
    """True when the trajectory sits exactly on the ``fps`` sampling grid."""
    expected = grid_timestamps(int(traj.timestamps[0]), len(traj), fps)
    return np.array_equal(traj.timestamps, expected)


def resample(traj: Trajectory, fps: float) -> Trajectory:
    """Linearly resample onto a uniform grid spanning the original track.

    The grid runs from the first to the last input timestamp at
    1000/fps ms spacing; positions are interpolated linearly in time, so
    every output point lies on an input segment.
    """
    if len(traj) < 2:
        raise ValueError(f"resample needs at least 2 samples, got {len(traj)}")
    if not (math.isfinite(fps) and fps > 0):
        raise ValueError(f"fps must be positive, got {fps}")
    first = int(traj.timestamps[0])
    last = int(traj.timestamps[-1])
    count = int(math.floor((last - first) * fps / 1000.0 + 1e-9)) + 1
    new_ts = grid_timestamps(first, count, fps)
    t_in = traj.timestamps.astype(np.float64)
    xs = np.interp(new_ts, t_in, traj.points[:, 0])
    ys = np.interp(new_ts, t_in, traj.points[:, 1])
    return Trajectory(new_ts, np.stack([xs, ys], axis=-1))


def sliding_windows(traj: Trajectory, cfg: SamplerConfig) -> list[WindowPair]:
    """Cut (input, target) pairs at ``cfg.stride_secs`` offsets.

    The trajectory must be uniform at ``cfg.fps`` and span at least
    ``input_secs + target_secs`` seconds; shorter tracks yield an empty
    list. Window k starts at sample offset ``k * stride_secs * fps``.
    """
    if not is_uniform(traj, cfg.fps):
        raise ValueError(f"trajectory is not uniform at {cfg.fps} fps; resample it first")
    stride = cfg.stride_secs * cfg.fps
    if abs(stride - round(stride)) > 1e-9 or round(stride) < 1:
        raise ValueError(f"stride_secs * fps must be a positive integer, got {stride}")
    stride_samples = round(stride)
    n_in = cfg.input_samples
    n_tgt = cfg.target_samples
    span_steps = len(traj) - 1
    if span_steps < n_in + n_tgt:
        return []
    count = (span_steps - n_in - n_tgt) // stride_samples + 1
    windows = []
    for k in range(count):
        s = k * stride_samples
        inp = traj.slice(s, s + n_in)
        tgt = traj.slice(s + n_in, s + n_in + n_tgt)
        windows.append(WindowPair(inp, tgt, anchor_time=int(inp.timestamps[-1])))
    return windows


def speed_profile(traj: Trajectory) -> np.ndarray:
    """Instantaneous speed per segment in m/s; length is n - 1."""
    if len(traj) < 2:
        raise ValueError(f"speed profile needs at least 2 samples, got {len(traj)}")
    dp = np.diff(traj.points, axis=0)
    dt = np.diff(traj.timestamps).astype(np.float64) / 1000.0
    return np.hypot(dp[:, 0], dp[:, 1]) / dt
