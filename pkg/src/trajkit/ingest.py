"""File ingestion and session persistence.

Streams travel as plain CSV (one header row, integer-millisecond
timestamps); a session's full state lives in a single versioned JSON
document written atomically. Loaders reject malformed input instead of
repairing it, and every rejection names the offending row.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .correction import Marker
from .gaze import GazeSample
from .geodesy import LAT_MAX_DEG, LON_MAX_DEG, PlanePoint
from .trajectory import Trajectory

SESSION_VERSION = 1
SPLITS = ("train", "val", "test")

GPS_HEADER = ["timestamp_ms", "lat", "lon"]
GAZE_HEADER = ["timestamp_ms", "x_px", "y_px"]


class FormatError(ValueError):
    """Malformed input file; message carries the file and data row."""

    def __init__(self, path, row: int | None, message: str):
        location = f"{path}" if row is None else f"{path}: row {row}"
        super().__init__(f"{location}: {message}")
        self.path = str(path)
        self.row = row


@dataclass(frozen=True)
class GpsRecord:
    timestamp_ms: int
    lat: float
    lon: float


@dataclass
class Session:
    """One recording's correction state: raw track, markers, optional outputs."""

    session_id: str
    raw_track: list[GpsRecord]
    markers: list[Marker] = field(default_factory=list)
    corrected_track: Trajectory | None = None
    gaze: list[GazeSample] | None = None
    manifest_split: str = "train"

    def __post_init__(self):
        if not self.session_id:
            raise ValueError("session_id must be non-empty")
        if not self.raw_track:
            raise ValueError("raw_track must be non-empty")
        ts = [r.timestamp_ms for r in self.raw_track]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("raw_track timestamps must be strictly increasing")
        if self.manifest_split not in SPLITS:
            raise ValueError(f"manifest_split must be one of {SPLITS}, got {self.manifest_split!r}")
        mts = [m.timestamp_ms for m in self.markers]
        if any(b <= a for a, b in zip(mts, mts[1:])):
            raise ValueError("marker timestamps must be strictly increasing")
        if mts and (mts[0] < ts[0] or mts[-1] > ts[-1]):
            raise ValueError("markers must lie within the raw track's time span")

    @property
    def raw_span_ms(self) -> tuple[int, int]:
        return self.raw_track[0].timestamp_ms, self.raw_track[-1].timestamp_ms


def _parse_int(value: str, path, row: int, name: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise FormatError(path, row, f"{name} must be an integer, got {value!r}") from None


def _parse_float(value: str, path, row: int, name: str) -> float:
    try:
        out = float(value)
    except ValueError:
        raise FormatError(path, row, f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(out):
        raise FormatError(path, row, f"{name} must be finite, got {value!r}")
    return out


def _read_rows(path, expected_header: list[str]):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(path, None, "file is empty") from None
        if header != expected_header:
            raise FormatError(path, None, f"expected header {expected_header}, got {header}")
        for row_no, row in enumerate(reader, start=1):
            if len(row) != len(expected_header):
                raise FormatError(path, row_no, f"expected {len(expected_header)} fields, got {len(row)}")
            yield row_no, row


def load_gps_csv(path) -> list[GpsRecord]:
    """Parse a `timestamp_ms,lat,lon` file into strictly ordered records."""
    records: list[GpsRecord] = []
    for row_no, row in _read_rows(path, GPS_HEADER):
        ts = _parse_int(row[0], path, row_no, "timestamp_ms")
        lat = _parse_float(row[1], path, row_no, "lat")
        lon = _parse_float(row[2], path, row_no, "lon")
        if abs(lat) > LAT_MAX_DEG:
            raise FormatError(path, row_no, f"latitude {lat} outside +/-{LAT_MAX_DEG}")
        if abs(lon) > LON_MAX_DEG:
            raise FormatError(path, row_no, f"longitude {lon} outside +/-{LON_MAX_DEG}")
        if records and ts <= records[-1].timestamp_ms:
            raise FormatError(path, row_no, f"timestamp {ts} not increasing")
        records.append(GpsRecord(ts, lat, lon))
    if not records:
        raise FormatError(path, None, "no data rows")
    return records


def save_gps_csv(records, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(GPS_HEADER)
        for r in records:
            writer.writerow([r.timestamp_ms, repr(r.lat), repr(r.lon)])


def load_gaze_csv(path) -> list[GazeSample]:
    """Parse a `timestamp_ms,x_px,y_px` file into a gaze stream."""
    stream: list[GazeSample] = []
    for row_no, row in _read_rows(path, GAZE_HEADER):
        ts = _parse_int(row[0], path, row_no, "timestamp_ms")
        x = _parse_float(row[1], path, row_no, "x_px")
        y = _parse_float(row[2], path, row_no, "y_px")
        if stream and ts <= stream[-1].timestamp_ms:
            raise FormatError(path, row_no, f"timestamp {ts} not increasing")
        stream.append(GazeSample(ts, x, y))
    if not stream:
        raise FormatError(path, None, "no data rows")
    return stream


def save_gaze_csv(stream, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(GAZE_HEADER)
        for s in stream:
            writer.writerow([s.timestamp_ms, repr(s.x), repr(s.y)])


def session_to_dict(session: Session) -> dict:
    """JSON-ready view of a session; field order is fixed for stable bytes."""
    return {
        "version": SESSION_VERSION,
        "session_id": session.session_id,
        "manifest_split": session.manifest_split,
        "raw_track": [[r.timestamp_ms, r.lat, r.lon] for r in session.raw_track],
        "markers": [[m.timestamp_ms, m.position.x, m.position.y] for m in session.markers],
        "corrected_track": None
        if session.corrected_track is None
        else {
            "timestamps": [int(t) for t in session.corrected_track.timestamps],
            "points": [[float(x), float(y)] for x, y in session.corrected_track.points],
        },
        "gaze": None
        if session.gaze is None
        else [[s.timestamp_ms, s.x, s.y] for s in session.gaze],
    }


def session_from_dict(data: dict) -> Session:
    version = data.get("version")
    if version != SESSION_VERSION:
        raise ValueError(f"unsupported session version {version!r} (expected {SESSION_VERSION})")
    corrected = None
    if data["corrected_track"] is not None:
        corrected = Trajectory(
            np.array(data["corrected_track"]["timestamps"], dtype=np.int64),
            np.array(data["corrected_track"]["points"], dtype=np.float64),
        )
    gaze = None
    if data["gaze"] is not None:
        gaze = [GazeSample(int(t), float(x), float(y)) for t, x, y in data["gaze"]]
    return Session(
        session_id=data["session_id"],
        raw_track=[GpsRecord(int(t), float(la), float(lo)) for t, la, lo in data["raw_track"]],
        markers=[
            Marker(int(t), PlanePoint(float(x), float(y))) for t, x, y in data["markers"]
        ],
        corrected_track=corrected,
        gaze=gaze,
        manifest_split=data["manifest_split"],
    )


def _atomic_write_text(path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_session(session: Session, path):
    """Write the session JSON atomically (temp file then rename)."""
    _atomic_write_text(path, json.dumps(session_to_dict(session), separators=(",", ":")) + "\n")


def load_session(path) -> Session:
    with open(path) as fh:
        data = json.load(fh)
    return session_from_dict(data)


def load_manifest(path) -> dict[str, str]:
    """Read the session-to-split assignment map."""
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("manifest must be a JSON object mapping session_id to split")
    for sid, split in data.items():
        if split not in SPLITS:
            raise ValueError(f"manifest entry {sid!r} has invalid split {split!r}")
    return dict(data)


def save_manifest(manifest: dict[str, str], path):
    for sid, split in manifest.items():
        if split not in SPLITS:
            raise ValueError(f"manifest entry {sid!r} has invalid split {split!r}")
    _atomic_write_text(path, json.dumps(dict(sorted(manifest.items())), indent=2) + "\n")
