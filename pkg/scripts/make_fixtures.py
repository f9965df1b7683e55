#!/usr/bin/env python3
"""Regenerate the deterministic synthetic fixtures under tests/fixtures/.

The scenario is a 60 s urban drive at 10 m/s: 20 s east, a 90 degree left
turn over 10 s, then 30 s north, with seeded GPS noise on top. Everything
downstream (markers, predictions, gaze) is derived from the same clean
path with fixed seeds, so reruns are byte-identical.
"""

import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from trajkit.correction import Marker  # noqa: E402
from trajkit.evaluation import baseline_linear  # noqa: E402
from trajkit.geodesy import GeoPoint, PlanePoint, to_mercator, unproject_xy  # noqa: E402
from trajkit.ingest import (  # noqa: E402
    GpsRecord,
    Session,
    save_gaze_csv,
    save_gps_csv,
    save_session,
)
from trajkit.gaze import GazeSample  # noqa: E402
from trajkit.trajectory import SamplerConfig, Trajectory, grid_timestamps, sliding_windows  # noqa: E402

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
FPS = 5.0
SPEED = 10.0
ANCHOR = GeoPoint(47.37, 8.54)


def clean_path() -> Trajectory:
    step = SPEED / FPS
    headings = np.concatenate(
        [
            np.zeros(100),  # 20 s east
            np.linspace(0.0, np.pi / 2.0, 50),  # 10 s of turning
            np.full(150, np.pi / 2.0),  # 30 s north
        ]
    )
    deltas = step * np.stack([np.cos(headings), np.sin(headings)], axis=-1)
    base = to_mercator(ANCHOR)
    pts = np.concatenate([[[base.x, base.y]], [base.x, base.y] + np.cumsum(deltas, axis=0)])
    return Trajectory(grid_timestamps(0, len(pts), FPS), pts)


def gps_records(track: Trajectory, noise_m: float, seed: int) -> list[GpsRecord]:
    rng = np.random.default_rng(seed)
    noisy = track.points + rng.normal(0.0, noise_m, size=track.points.shape)
    lat, lon = unproject_xy(noisy)
    return [
        GpsRecord(int(t), float(la), float(lo))
        for t, la, lo in zip(track.timestamps, lat, lon)
    ]


def gaze_stream(seed: int, n: int = 2000, step_ms: int = 5) -> list[GazeSample]:
    rng = np.random.default_rng(seed)
    x, y = 544.0, 300.0
    samples = []
    for i in range(n):
        if rng.random() < 0.008:
            x = float(rng.uniform(100.0, 1000.0))
            y = float(rng.uniform(100.0, 500.0))
        else:
            x += float(rng.normal(0.0, 1.5))
            y += float(rng.normal(0.0, 1.5))
        samples.append(GazeSample(i * step_ms, round(x, 2), round(y, 2)))
    return samples


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    track = clean_path()
    records = gps_records(track, noise_m=1.5, seed=20240601)
    save_gps_csv(records, FIXTURES / "track.csv")

    # markers every 5 s on the clean path
    marker_idx = range(0, len(track), 25)
    lat, lon = unproject_xy(track.points)
    markers = [
        {"timestamp_ms": int(track.timestamps[i]), "lat": float(lat[i]), "lon": float(lon[i])}
        for i in marker_idx
    ]
    (FIXTURES / "markers.json").write_text(json.dumps({"markers": markers}, indent=2) + "\n")

    # centerline: the clean path thinned to 2 s spacing
    coords = [[float(lon[i]), float(lat[i])] for i in range(0, len(track), 10)]
    geojson = {
        "type": "FeatureCollection",
        "features": [
            {
                "type": "Feature",
                "properties": {"name": "main-road"},
                "geometry": {"type": "LineString", "coordinates": coords},
            }
        ],
    }
    (FIXTURES / "centerlines.geojson").write_text(json.dumps(geojson, indent=2) + "\n")

    # the session ships with its correction already committed: markers on
    # the clean path and the clean track as corrected ground truth
    session_markers = [
        Marker(int(track.timestamps[i]), PlanePoint(*track.points[i])) for i in marker_idx
    ]
    session = Session(
        session_id="demo",
        raw_track=records,
        markers=session_markers,
        corrected_track=track,
    )
    save_session(session, FIXTURES / "session.json")

    # linear-baseline predictions for every window of the corrected track
    lines = ["window_id,step,x,y"]
    for w in sliding_windows(track, SamplerConfig()):
        pred = baseline_linear(w)
        wid = int(w.input.timestamps[0])
        for k, (x, y) in enumerate(pred.points, start=1):
            lines.append(f"{wid},{k},{float(x)!r},{float(y)!r}")
    (FIXTURES / "predictions.csv").write_text("\n".join(lines) + "\n")

    save_gaze_csv(gaze_stream(seed=7), FIXTURES / "gaze.csv")
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
