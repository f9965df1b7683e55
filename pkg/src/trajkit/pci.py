"""Path complexity scoring for planar trajectories.

The path complexity index (PCI) of a future trajectory, given the
observed past, is the discrete Frechet distance in meters between that
future and a constant-velocity continuation of the past: the "simple"
trajectory obtained by repeating the velocity vector of the final two
observed points. A value of 0 means the driver kept speed and direction;
large values mark turns, stops, and other maneuvers that a straight-line
extrapolation cannot explain.

The Frechet distance is computed on the sampled points (the discrete
variant): the minimum over monotone couplings of the two point sequences
of the maximum paired Euclidean distance. On uniformly sampled tracks it
upper-bounds the continuous distance by at most one inter-sample spacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .geodesy import PlanePoint
from .trajectory import SamplerConfig, Trajectory, grid_timestamps, is_uniform, sliding_windows


class CurvatureProfile(str, Enum):
    """How a synthetic turn distributes its heading change over time."""

    CONSTANT = "constant"
    EASE_IN = "ease_in"
    EASE_OUT = "ease_out"


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of a generated target path: speed, total turn, curvature shape."""

    speed: float  # m/s
    turn_angle_deg: float  # total heading change over the whole path
    curvature_profile: CurvatureProfile = CurvatureProfile.CONSTANT
    duration_secs: float = 6.0

    def __post_init__(self):
        if not (math.isfinite(self.speed) and self.speed > 0):
            raise ValueError(f"speed must be positive, got {self.speed}")
        if not math.isfinite(self.turn_angle_deg):
            raise ValueError("turn_angle_deg must be finite")
        if not (math.isfinite(self.duration_secs) and self.duration_secs > 0):
            raise ValueError(f"duration_secs must be positive, got {self.duration_secs}")
        object.__setattr__(self, "curvature_profile", CurvatureProfile(self.curvature_profile))


@dataclass(frozen=True)
class PciResult:
    """Complexity value plus the extrapolated trajectory it was measured against."""

    value: float
    simple_trajectory: Trajectory


def _uniform_step_ms(traj: Trajectory) -> int:
    steps = np.diff(traj.timestamps)
    if len(steps) == 0:
        raise ValueError("need at least 2 samples to determine the step")
    if steps.max() - steps.min() > 1:  # 1 ms slack for rounded grids
        raise ValueError("trajectory is not uniformly sampled")
    return int(steps[-1])


def simple_extrapolation(input: Trajectory, n_steps: int) -> Trajectory:
    """Continue a uniform trajectory at the velocity of its final two points.

    Output point k is ``last + k * v_final`` for k = 1..n_steps, on the
    continued time grid. The velocity is taken from exactly the last two
    samples, not a smoothed estimate.
    """
    if len(input) < 2:
        raise ValueError(f"extrapolation needs at least 2 samples, got {len(input)}")
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    step_ms = _uniform_step_ms(input)
    v_final = input.points[-1] - input.points[-2]
    ks = np.arange(1, n_steps + 1)
    points = input.points[-1] + ks[:, None] * v_final
    timestamps = int(input.timestamps[-1]) + ks.astype(np.int64) * step_ms
    return Trajectory(timestamps, points)


def discrete_frechet(p, q) -> float:
    """Discrete Frechet distance between two point sequences, in meters.

    Dynamic program over the coupling lattice: cell (i, j) holds the best
    achievable max-distance for prefixes p[:i+1], q[:j+1].
    """
    P = np.asarray(p, dtype=np.float64)
    Q = np.asarray(q, dtype=np.float64)
    if P.ndim != 2 or P.shape[1] != 2 or Q.ndim != 2 or Q.shape[1] != 2:
        raise ValueError("inputs must be (n, 2) point arrays")
    if len(P) == 0 or len(Q) == 0:
        raise ValueError("point sequences must be non-empty")
    if not (np.all(np.isfinite(P)) and np.all(np.isfinite(Q))):
        raise ValueError("points must be finite")
    d = np.hypot(P[:, None, 0] - Q[None, :, 0], P[:, None, 1] - Q[None, :, 1])
    m, n = d.shape
    ca = np.empty((m, n), dtype=np.float64)
    ca[0, :] = np.maximum.accumulate(d[0, :])
    ca[:, 0] = np.maximum.accumulate(d[:, 0])
    for i in range(1, m):
        row = ca[i]
        prev = ca[i - 1]
        di = d[i]
        for j in range(1, n):
            best = prev[j]
            if prev[j - 1] < best:
                best = prev[j - 1]
            if row[j - 1] < best:
                best = row[j - 1]
            row[j] = best if best > di[j] else di[j]
    return float(ca[-1, -1])


def pci(input: Trajectory, target: Trajectory) -> PciResult:
    """Path complexity of ``target`` given ``input``.

    Both trajectories must be uniformly sampled at the same rate. The
    result is the discrete Frechet distance between the target and the
    constant-velocity extrapolation of the input over the target length.
    """
    if len(input) < 2:
        raise ValueError(f"pci needs at least 2 input samples, got {len(input)}")
    step_in = _uniform_step_ms(input)
    if len(target) >= 2:
        step_tgt = _uniform_step_ms(target)
        if abs(step_in - step_tgt) > 1:
            raise ValueError(
                f"input and target sampled at different rates ({step_in} vs {step_tgt} ms)"
            )
    simple = simple_extrapolation(input, len(target))
    value = discrete_frechet(target.points, simple.points)
    return PciResult(value=value, simple_trajectory=simple)


def _heading_fractions(profile: CurvatureProfile, n: int) -> np.ndarray:
    # Cumulative share of the total turn applied by each step's midpoint.
    s = (np.arange(1, n + 1) - 0.5) / n
    if profile is CurvatureProfile.CONSTANT:
        return s
    if profile is CurvatureProfile.EASE_IN:
        return s * s
    return s * (2.0 - s)  # ease_out


def generate_target(
    input_end: PlanePoint, heading: float, spec: SyntheticSpec, fps: float
) -> Trajectory:
    """Synthesize an arc-like future path emanating from ``input_end``.

    The path moves at constant speed, starts along ``heading`` (radians),
    and accumulates ``spec.turn_angle_deg`` of heading change shaped by
    the curvature profile. The first output point is one sample step past
    ``input_end``, so a zero-angle path exactly matches the simple
    extrapolation of a straight input arriving at ``input_end``.
    """
    if not (math.isfinite(fps) and fps > 0):
        raise ValueError(f"fps must be positive, got {fps}")
    n = round(spec.duration_secs * fps)
    if n < 1:
        raise ValueError(f"duration {spec.duration_secs}s too short for one sample at {fps} fps")
    step_len = spec.speed / fps
    headings = heading + math.radians(spec.turn_angle_deg) * _heading_fractions(
        spec.curvature_profile, n
    )
    steps = step_len * np.stack([np.cos(headings), np.sin(headings)], axis=-1)
    points = input_end.as_array() + np.cumsum(steps, axis=0)
    timestamps = grid_timestamps(0, n + 1, fps)[1:]
    return Trajectory(timestamps, points)


def pci_profile(traj: Trajectory, cfg: SamplerConfig, stride_secs: float = 1.0) -> np.ndarray:
    """Per-point mean complexity from a dense sliding-window sweep.

    Windows of ``cfg.input_secs`` + ``cfg.target_secs`` are slid across
    the trajectory at ``stride_secs``; each window's complexity value is
    assigned to every point of its target span, and each point reports the
    mean of the values it received. Points never covered by any target
    (including every point of a too-short trajectory) are NaN.
    """
    if not (math.isfinite(stride_secs) and stride_secs > 0):
        raise ValueError(f"stride_secs must be positive, got {stride_secs}")
    if not is_uniform(traj, cfg.fps):
        raise ValueError(f"trajectory is not uniform at {cfg.fps} fps; resample it first")
    n = len(traj)
    sums = np.zeros(n)
    counts = np.zeros(n, dtype=np.int64)
    n_in = cfg.input_samples
    n_tgt = cfg.target_samples
    stride = stride_secs * cfg.fps
    if abs(stride - round(stride)) > 1e-9 or round(stride) < 1:
        raise ValueError(f"stride_secs * fps must be a positive integer, got {stride}")
    for w in sliding_windows(traj, replace(cfg, stride_secs=stride_secs)):
        start = int(np.searchsorted(traj.timestamps, w.input.timestamps[0]))
        value = pci(w.input, w.target).value
        lo = start + n_in
        sums[lo : lo + n_tgt] += value
        counts[lo : lo + n_tgt] += 1
    profile = np.full(n, np.nan)
    covered = counts > 0
    profile[covered] = sums[covered] / counts[covered]
    return profile
