"""HTTP session service backing the interactive correction UI.

Sessions live as JSON files in a data directory and are served over a
small JSON API. Marker edits and commits take a per-session edit lock
without blocking: a second writer racing the first receives 409 instead
of silently clobbering annotation work. Session objects are replaced
wholesale on mutation, so concurrent readers always observe a complete
snapshot. All geometry goes out in both plane meters and lat/lon degrees
so the map client needs no projection math.
"""

from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .correction import Marker, snap_timestamp, spline_correct
from .geodesy import GeoPoint, to_mercator, unproject_xy
from .ingest import Session, load_session, save_session, session_to_dict
from .pci import pci_profile
from .trajectory import SamplerConfig, Trajectory, resample, speed_profile


class EditInFlight(Exception):
    """Another mutation currently holds the session's edit lock."""


class SessionStore:
    """Directory-backed session registry with per-session edit exclusivity."""

    def __init__(self, data_dir):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._registry_lock = threading.Lock()
        self._sessions: dict[str, Session] = {}
        self._edit_locks: dict[str, threading.Lock] = {}
        for path in sorted(self.data_dir.glob("*.json")):
            if path.name == "manifest.json":
                continue
            session = load_session(path)
            self._sessions[session.session_id] = session
            self._edit_locks[session.session_id] = threading.Lock()

    def _path(self, session_id: str) -> Path:
        return self.data_dir / f"{session_id}.json"

    def ids(self) -> list[str]:
        with self._registry_lock:
            return sorted(self._sessions)

    def get(self, session_id: str) -> Session:
        with self._registry_lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise KeyError(session_id) from None

    @contextmanager
    def edit(self, session_id: str):
        """Exclusive edit scope; raises EditInFlight instead of waiting."""
        with self._registry_lock:
            if session_id not in self._sessions:
                raise KeyError(session_id)
            lock = self._edit_locks[session_id]
        if not lock.acquire(blocking=False):
            raise EditInFlight(session_id)
        try:
            yield self.get(session_id)
        finally:
            lock.release()

    def replace(self, session: Session):
        """Persist then publish a new session snapshot."""
        save_session(session, self._path(session.session_id))
        with self._registry_lock:
            self._sessions[session.session_id] = session


class MarkerIn(BaseModel):
    timestamp_ms: int
    lat: float
    lon: float


class MarkersBody(BaseModel):
    markers: list[MarkerIn]


def _snap_markers(session: Session, incoming: list[MarkerIn]) -> list[Marker]:
    ts_in = [m.timestamp_ms for m in incoming]
    if any(b <= a for a, b in zip(ts_in, ts_in[1:])):
        raise HTTPException(status_code=422, detail="marker timestamps must be strictly increasing")
    raw_ts = np.array([r.timestamp_ms for r in session.raw_track], dtype=np.int64)
    markers: list[Marker] = []
    for m in incoming:
        try:
            plane = to_mercator(GeoPoint(m.lat, m.lon))
        except ValueError as err:
            raise HTTPException(status_code=422, detail=str(err)) from None
        snapped = snap_timestamp(raw_ts, m.timestamp_ms)
        if markers and snapped <= markers[-1].timestamp_ms:
            raise HTTPException(
                status_code=422,
                detail=f"markers collapse onto the same raw sample at {snapped} ms",
            )
        markers.append(Marker(snapped, plane))
    return markers


def _corrected_trajectory(session: Session) -> Trajectory:
    markers = session.markers
    raw_ts = np.array([r.timestamp_ms for r in session.raw_track], dtype=np.int64)
    lo, hi = markers[0].timestamp_ms, markers[-1].timestamp_ms
    grid = raw_ts[(raw_ts >= lo) & (raw_ts <= hi)]
    return spline_correct(markers, grid)


def _marker_payload(markers: list[Marker]) -> list[dict]:
    if not markers:
        return []
    pts = np.array([[m.position.x, m.position.y] for m in markers])
    lat, lon = unproject_xy(pts)
    return [
        {
            "timestamp_ms": m.timestamp_ms,
            "x": m.position.x,
            "y": m.position.y,
            "lat": float(la),
            "lon": float(lo),
        }
        for m, la, lo in zip(markers, lat, lon)
    ]


def _preview_payload(
    session: Session,
    with_pci: bool,
    sampler: SamplerConfig,
    profile_stride_secs: float,
) -> dict:
    corrected = _corrected_trajectory(session)
    lat, lon = unproject_xy(corrected.points)
    payload = {
        "session_id": session.session_id,
        "markers": _marker_payload(session.markers),
        "corrected_points": [
            {"timestamp_ms": int(t), "x": float(x), "y": float(y), "lat": float(la), "lon": float(lo)}
            for t, (x, y), la, lo in zip(corrected.timestamps, corrected.points, lat, lon)
        ],
        "speeds_mps": [float(v) for v in speed_profile(corrected)],
    }
    if with_pci:
        uniform = resample(corrected, sampler.fps)
        profile = pci_profile(uniform, sampler, stride_secs=profile_stride_secs)
        nearest = np.argmin(
            np.abs(uniform.timestamps[None, :] - corrected.timestamps[:, None]), axis=1
        )
        values = profile[nearest]
        payload["pci_profile"] = [None if math.isnan(v) else float(v) for v in values]
    return payload


def create_app(
    data_dir,
    sampler: SamplerConfig = SamplerConfig(),
    profile_stride_secs: float = 1.0,
) -> FastAPI:
    store = SessionStore(data_dir)
    app = FastAPI(title="trajkit session service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store

    def _get_or_404(session_id: str) -> Session:
        try:
            return store.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}") from None

    @app.get("/sessions")
    def list_sessions():
        out = []
        for sid in store.ids():
            s = store.get(sid)
            out.append(
                {
                    "session_id": s.session_id,
                    "manifest_split": s.manifest_split,
                    "n_points": len(s.raw_track),
                    "n_markers": len(s.markers),
                    "has_corrected": s.corrected_track is not None,
                }
            )
        return out

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return session_to_dict(_get_or_404(session_id))

    @app.put("/sessions/{session_id}/markers")
    def put_markers(session_id: str, body: MarkersBody):
        _get_or_404(session_id)
        try:
            with store.edit(session_id) as session:
                markers = _snap_markers(session, body.markers)
                updated = Session(
                    session_id=session.session_id,
                    raw_track=session.raw_track,
                    markers=markers,
                    corrected_track=session.corrected_track,
                    gaze=session.gaze,
                    manifest_split=session.manifest_split,
                )
                store.replace(updated)
                if len(markers) >= 2:
                    return _preview_payload(updated, False, sampler, profile_stride_secs)
                return {"session_id": session_id, "markers": _marker_payload(markers)}
        except EditInFlight:
            raise HTTPException(status_code=409, detail="another edit is in flight") from None

    @app.get("/sessions/{session_id}/preview")
    def get_preview(session_id: str, pci: bool = False):
        session = _get_or_404(session_id)
        if len(session.markers) < 2:
            raise HTTPException(status_code=409, detail="need at least 2 markers for a preview")
        return _preview_payload(session, pci, sampler, profile_stride_secs)

    @app.post("/sessions/{session_id}/commit")
    def commit(session_id: str):
        _get_or_404(session_id)
        try:
            with store.edit(session_id) as session:
                if len(session.markers) < 2:
                    raise HTTPException(status_code=409, detail="nothing to commit: need at least 2 markers")
                corrected = _corrected_trajectory(session)
                updated = Session(
                    session_id=session.session_id,
                    raw_track=session.raw_track,
                    markers=session.markers,
                    corrected_track=corrected,
                    gaze=session.gaze,
                    manifest_split=session.manifest_split,
                )
                store.replace(updated)
                return {
                    "session_id": session_id,
                    "committed": True,
                    "n_points": len(corrected),
                }
        except EditInFlight:
            raise HTTPException(status_code=409, detail="another edit is in flight") from None

    return app


def run(data_dir, port: int = 8000, host: str = "127.0.0.1"):
    """Serve the session API; blocking."""
    import uvicorn

    uvicorn.run(create_app(data_dir), host=host, port=port)
