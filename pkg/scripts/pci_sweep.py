#!/usr/bin/env python3
"""Sweep the synthetic target generator and print the complexity grid.

For a straight input at each speed, generates targets over a grid of
turn angles and curvature profiles and reports the resulting path
complexity in meters. Useful for eyeballing how the metric orders
maneuvers before trusting it on real tracks.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from trajkit.geodesy import PlanePoint  # noqa: E402
from trajkit.pci import CurvatureProfile, SyntheticSpec, generate_target, pci  # noqa: E402
from trajkit.trajectory import Trajectory, grid_timestamps  # noqa: E402

FPS = 5.0
SPEEDS = (5.0, 10.0, 20.0)
ANGLES = (0.0, 30.0, 60.0, 90.0, 135.0, 180.0)


def straight_track(n, fps, speed):
    xs = np.arange(n, dtype=np.float64) * speed / fps
    return Trajectory(grid_timestamps(0, n, fps), np.stack([xs, np.zeros(n)], axis=-1))


def main():
    header = "speed   profile    " + "".join(f"{a:>8.0f}" for a in ANGLES)
    print(header)
    print("-" * len(header))
    for speed in SPEEDS:
        inp = straight_track(40, fps=FPS, speed=speed)
        end = PlanePoint(*inp.points[-1])
        for profile in CurvatureProfile:
            row = [f"{speed:5.1f}   {profile.value:<9}"]
            for angle in ANGLES:
                spec = SyntheticSpec(speed=speed, turn_angle_deg=angle, curvature_profile=profile)
                value = pci(inp, generate_target(end, 0.0, spec, FPS)).value
                row.append(f"{value:8.2f}")
            print(" ".join(row))


if __name__ == "__main__":
    main()
