"""Command-line entry points for the trajectory toolkit."""

from __future__ import annotations

import csv
import json
import math
import sys
from collections import defaultdict

import click
import numpy as np

from . import correction, evaluation, ingest
from .correction import Centerline, Marker, snap_timestamp
from .gaze import FixationConfig, detect_fixations
from .geodesy import GeoPoint, project_latlon, to_mercator, unproject_xy
from .pci import pci, pci_profile
from .trajectory import SamplerConfig, Trajectory, resample, sliding_windows


def _track_from_records(records) -> Trajectory:
    ts = np.array([r.timestamp_ms for r in records], dtype=np.int64)
    points = project_latlon(
        np.array([r.lat for r in records]), np.array([r.lon for r in records])
    )
    return Trajectory(ts, points)


def _sampler(input_secs, target_secs, stride_secs, fps) -> SamplerConfig:
    try:
        return SamplerConfig(
            input_secs=input_secs, target_secs=target_secs, stride_secs=stride_secs, fps=fps
        )
    except ValueError as err:
        raise click.UsageError(str(err)) from None


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(value: float) -> str:
    return repr(float(value))


@click.group()
def main():
    """Trajectory toolkit: complexity scoring, forecast metrics, gaze and GPS tools."""


@main.command("pci")
@click.option("--track", "track_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--profile-out", type=click.Path(dir_okay=False), default=None,
              help="Also write the per-point mean complexity profile.")
@click.option("--fps", default=5.0, show_default=True)
@click.option("--input-secs", default=8.0, show_default=True)
@click.option("--target-secs", default=6.0, show_default=True)
@click.option("--stride-secs", default=2.0, show_default=True)
@click.option("--profile-stride-secs", default=1.0, show_default=True)
def pci_command(track_path, out_path, profile_out, fps, input_secs, target_secs, stride_secs,
                profile_stride_secs):
    """Score path complexity per sliding window of a GPS track."""
    cfg = _sampler(input_secs, target_secs, stride_secs, fps)
    track = _track_from_records(ingest.load_gps_csv(track_path))
    uniform = resample(track, cfg.fps)
    windows = sliding_windows(uniform, cfg)
    rows = [
        (int(w.input.timestamps[0]), _fmt(pci(w.input, w.target).value)) for w in windows
    ]
    _write_csv(out_path, ["window_start_ms", "pci_m"], rows)
    click.echo(f"wrote {len(rows)} windows to {out_path}")
    if profile_out is not None:
        profile = pci_profile(uniform, cfg, stride_secs=profile_stride_secs)
        prows = [
            (int(t), "nan" if math.isnan(v) else _fmt(v))
            for t, v in zip(uniform.timestamps, profile)
        ]
        _write_csv(profile_out, ["timestamp_ms", "mean_pci_m"], prows)
        click.echo(f"wrote profile for {len(prows)} points to {profile_out}")


def _load_predictions(path, n_steps: int) -> dict[int, np.ndarray]:
    groups: dict[int, dict[int, tuple[float, float]]] = defaultdict(dict)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["window_id", "step", "x", "y"]:
            raise click.UsageError(
                f"{path}: expected header window_id,step,x,y, got {header}"
            )
        for row_no, row in enumerate(reader, start=1):
            try:
                wid, step, x, y = int(row[0]), int(row[1]), float(row[2]), float(row[3])
            except (ValueError, IndexError):
                raise click.UsageError(f"{path}: row {row_no}: malformed prediction row {row}") from None
            if step in groups[wid]:
                raise click.UsageError(f"{path}: row {row_no}: duplicate step {step} for window {wid}")
            groups[wid][step] = (x, y)
    out = {}
    for wid, steps in groups.items():
        if sorted(steps) != list(range(1, n_steps + 1)):
            raise click.UsageError(
                f"{path}: window {wid} must have steps 1..{n_steps}, got {sorted(steps)}"
            )
        out[wid] = np.array([steps[k] for k in range(1, n_steps + 1)], dtype=np.float64)
    return out


@main.command("eval")
@click.option("--session", "session_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--pred", "pred_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Predictions CSV: window_id,step,x,y in plane meters.")
@click.option("--json-out", type=click.Path(dir_okay=False), default=None)
@click.option("--label", default="predictions", show_default=True)
@click.option("--pci-threshold", default=evaluation.DEFAULT_PCI_THRESHOLD, show_default=True)
@click.option("--fps", default=5.0, show_default=True)
@click.option("--input-secs", default=8.0, show_default=True)
@click.option("--target-secs", default=6.0, show_default=True)
@click.option("--stride-secs", default=2.0, show_default=True)
def eval_command(session_path, pred_path, json_out, label, pci_threshold, fps, input_secs,
                 target_secs, stride_secs):
    """Evaluate predictions against a session's ground-truth track."""
    cfg = _sampler(input_secs, target_secs, stride_secs, fps)
    session = ingest.load_session(session_path)
    if session.corrected_track is not None:
        track = session.corrected_track
    else:
        track = _track_from_records(session.raw_track)
    uniform = resample(track, cfg.fps)
    windows = {int(w.input.timestamps[0]): w for w in sliding_windows(uniform, cfg)}
    if not windows:
        raise click.UsageError("session track is too short for a single window")
    preds = _load_predictions(pred_path, cfg.target_samples)
    unknown = sorted(set(preds) - set(windows))
    if unknown:
        raise click.UsageError(f"predictions reference unknown windows {unknown}")
    horizons = [
        float(h)
        for h in range(1, int(math.floor(target_secs)) + 1)
        if abs(h * fps - round(h * fps)) < 1e-9
    ]
    samples = []
    for wid in sorted(preds):
        w = windows[wid]
        pred_traj = Trajectory(w.target.timestamps, preds[wid])
        samples.append(
            evaluation.SampleResult(
                window_id=wid,
                ade=evaluation.ade(pred_traj, w.target),
                fde=evaluation.fde(pred_traj, w.target),
                pci=pci(w.input, w.target).value,
                fde_at={h: evaluation.fde_at(pred_traj, w.target, h, fps) for h in horizons},
            )
        )
    rep = evaluation.report(samples, pci_threshold=pci_threshold)
    if json_out is not None:
        with open(json_out, "w") as fh:
            json.dump(rep.to_dict(), fh, indent=2)
            fh.write("\n")
    filtered_label = f"ADE+{pci_threshold:g}PCI (m)"
    headers = ["method", "ADE (m)", filtered_label]
    ade_cell = f"{rep.overall.mean_ade:.3f}" if rep.overall else "-"
    filt_cell = f"{rep.filtered.mean_ade:.3f}" if rep.filtered else "-"
    rows = [[label, ade_cell, filt_cell]]
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    click.echo("  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip())
    for r in rows:
        click.echo("  ".join(c.ljust(widths[i]) for i, c in enumerate(r)).rstrip())


@main.command("fixations")
@click.option("--gaze", "gaze_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--min-duration-ms", default=80, show_default=True)
@click.option("--max-duration-ms", default=1000, show_default=True)
@click.option("--dispersion-deg", default=1.5, show_default=True)
@click.option("--deg-per-pixel", default=0.075, show_default=True)
def fixations_command(gaze_path, out_path, min_duration_ms, max_duration_ms, dispersion_deg,
                      deg_per_pixel):
    """Detect stable-gaze fixations in a gaze CSV stream."""
    try:
        cfg = FixationConfig(
            min_duration_ms=min_duration_ms,
            max_duration_ms=max_duration_ms,
            dispersion_deg=dispersion_deg,
            deg_per_pixel=deg_per_pixel,
        )
    except ValueError as err:
        raise click.UsageError(str(err)) from None
    stream = ingest.load_gaze_csv(gaze_path)
    fixations = detect_fixations(stream, cfg)
    rows = [
        (f.start_ms, f.end_ms, _fmt(f.cx), _fmt(f.cy), f.sample_count) for f in fixations
    ]
    _write_csv(out_path, ["start_ms", "end_ms", "cx", "cy", "n"], rows)
    click.echo(f"wrote {len(rows)} fixations to {out_path}")


def _load_marker_file(path, raw_ts: np.ndarray) -> list[Marker]:
    with open(path) as fh:
        data = json.load(fh)
    entries = data.get("markers") if isinstance(data, dict) else None
    if not isinstance(entries, list):
        raise click.UsageError(f"{path}: expected an object with a 'markers' list")
    markers = []
    for entry in entries:
        try:
            plane = to_mercator(GeoPoint(float(entry["lat"]), float(entry["lon"])))
            snapped = snap_timestamp(raw_ts, int(entry["timestamp_ms"]))
        except (KeyError, TypeError, ValueError) as err:
            raise click.UsageError(f"{path}: bad marker {entry}: {err}") from None
        if markers and snapped <= markers[-1].timestamp_ms:
            raise click.UsageError(f"{path}: markers collapse onto the same raw sample")
        markers.append(Marker(snapped, plane))
    return markers


def _load_centerlines(path) -> list[Centerline]:
    with open(path) as fh:
        data = json.load(fh)
    if data.get("type") != "FeatureCollection":
        raise click.UsageError(f"{path}: expected a GeoJSON FeatureCollection")
    lines = []
    for feature in data.get("features", []):
        geom = feature.get("geometry", {})
        if geom.get("type") != "LineString":
            raise click.UsageError(f"{path}: every feature must be a LineString")
        coords = geom.get("coordinates", [])
        lat = np.array([c[1] for c in coords], dtype=np.float64)
        lon = np.array([c[0] for c in coords], dtype=np.float64)
        lines.append(Centerline(project_latlon(lat, lon)))
    if not lines:
        raise click.UsageError(f"{path}: no LineString features found")
    return lines


@main.command("correct")
@click.option("--track", "track_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--markers", "markers_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="JSON: {\"markers\": [{\"timestamp_ms\", \"lat\", \"lon\"}, ...]}")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--centerlines", "centerlines_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="GeoJSON LineString features for the noise analysis.")
@click.option("--histogram-out", type=click.Path(dir_okay=False), default=None)
@click.option("--bin-width", default=0.5, show_default=True)
def correct_command(track_path, markers_path, out_path, centerlines_path, histogram_out, bin_width):
    """Spline-correct a GPS track through hand-placed markers."""
    records = ingest.load_gps_csv(track_path)
    raw_ts = np.array([r.timestamp_ms for r in records], dtype=np.int64)
    markers = _load_marker_file(markers_path, raw_ts)
    if len(markers) < 2:
        raise click.UsageError("need at least 2 markers to interpolate")
    lo, hi = markers[0].timestamp_ms, markers[-1].timestamp_ms
    grid = raw_ts[(raw_ts >= lo) & (raw_ts <= hi)]
    corrected = correction.spline_correct(markers, grid)
    lat, lon = unproject_xy(corrected.points)
    rows = [
        (int(t), _fmt(x), _fmt(y), _fmt(la), _fmt(lo_))
        for t, (x, y), la, lo_ in zip(corrected.timestamps, corrected.points, lat, lon)
    ]
    _write_csv(out_path, ["timestamp_ms", "x", "y", "lat", "lon"], rows)
    click.echo(f"wrote {len(rows)} corrected points to {out_path}")
    if centerlines_path is not None:
        lines = _load_centerlines(centerlines_path)
        distances = correction.distance_to_centerline(corrected, lines)
        if histogram_out is not None:
            hist = correction.noise_histogram(distances, bin_width)
            hrows = [
                (_fmt(k * bin_width), _fmt((k + 1) * bin_width), hist[k]) for k in sorted(hist)
            ]
            _write_csv(histogram_out, ["bin_lo_m", "bin_hi_m", "count"], hrows)
            click.echo(f"wrote {len(hrows)} histogram bins to {histogram_out}")
        else:
            click.echo(f"mean distance to centerline: {float(np.mean(distances)):.3f} m")


@main.command("serve")
@click.option("--data-dir", required=True, type=click.Path(file_okay=False))
@click.option("--port", default=8000, show_default=True, envvar="TRAJKIT_PORT")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve_command(data_dir, port, host):
    """Run the interactive-correction session service."""
    from .service import run

    run(data_dir, port=port, host=host)


if __name__ == "__main__":
    sys.exit(main())
