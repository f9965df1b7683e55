import numpy as np
import pytest

from trajkit.trajectory import SamplerConfig, Trajectory, grid_timestamps


def uniform_trajectory(points, fps=5.0, start_ms=0):
    """Build a trajectory on the exact fps grid from an (n, 2) point array."""
    pts = np.asarray(points, dtype=np.float64)
    return Trajectory(grid_timestamps(start_ms, len(pts), fps), pts)


def straight_track(n, fps=5.0, speed=10.0, heading=0.0, start=(0.0, 0.0), start_ms=0):
    """Constant-velocity track of n samples."""
    step = speed / fps
    ks = np.arange(n, dtype=np.float64)
    direction = np.array([np.cos(heading), np.sin(heading)])
    pts = np.asarray(start, dtype=np.float64) + ks[:, None] * step * direction
    return uniform_trajectory(pts, fps=fps, start_ms=start_ms)


@pytest.fixture
def default_cfg():
    return SamplerConfig()
