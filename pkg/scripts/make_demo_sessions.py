#!/usr/bin/env python3
"""Build a demo session directory for the annotation service and UI.

Usage: python3 scripts/make_demo_sessions.py [data_dir]

Writes a couple of synthetic noisy drives plus a manifest, then serve them:

    trajkit serve --data-dir demo_data --port 8000
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from trajkit.geodesy import GeoPoint, to_mercator, unproject_xy  # noqa: E402
from trajkit.ingest import GpsRecord, Session, save_manifest, save_session  # noqa: E402
from trajkit.trajectory import Trajectory, grid_timestamps  # noqa: E402

SCENARIOS = {
    # session_id: (turn angle in degrees, noise sigma in meters, split)
    "drive-straight": (0.0, 2.0, "train"),
    "drive-left-turn": (90.0, 2.5, "val"),
    "drive-u-turn": (180.0, 3.0, "test"),
}


def drive(turn_deg: float, seed: int) -> Trajectory:
    fps, speed, secs = 1.0, 10.0, 90.0
    n = int(secs * fps)
    third = n // 3
    headings = np.concatenate(
        [
            np.zeros(third),
            np.linspace(0.0, np.radians(turn_deg), third),
            np.full(n - 2 * third, np.radians(turn_deg)),
        ]
    )
    base = to_mercator(GeoPoint(47.37, 8.54))
    steps = (speed / fps) * np.stack([np.cos(headings), np.sin(headings)], axis=-1)
    pts = np.concatenate([[[base.x, base.y]], [base.x, base.y] + np.cumsum(steps, axis=0)])
    return Trajectory(grid_timestamps(0, len(pts), fps), pts)


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_data")
    out.mkdir(parents=True, exist_ok=True)
    manifest = {}
    for i, (sid, (angle, sigma, split)) in enumerate(SCENARIOS.items()):
        rng = np.random.default_rng(1000 + i)
        track = drive(angle, seed=1000 + i)
        noisy = track.points + rng.normal(0.0, sigma, size=track.points.shape)
        lat, lon = unproject_xy(noisy)
        records = [
            GpsRecord(int(t), float(la), float(lo))
            for t, la, lo in zip(track.timestamps, lat, lon)
        ]
        session = Session(session_id=sid, raw_track=records, manifest_split=split)
        save_session(session, out / f"{sid}.json")
        manifest[sid] = split
        print(f"wrote {out / f'{sid}.json'} ({len(records)} points, split={split})")
    save_manifest(manifest, out / "manifest.json")
    print(f"wrote {out / 'manifest.json'}")


if __name__ == "__main__":
    main()
