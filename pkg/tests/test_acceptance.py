"""Acceptance suite: one test per release criterion, one printed verdict line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the verdict lines.
"""

import functools
import math
import time
from pathlib import Path

import numpy as np
from click.testing import CliRunner

from trajkit.cli import main as cli_main
from trajkit.evaluation import (
    ade,
    auxiliary_weight,
    baseline_linear,
    discount_weights,
    fde,
)
from trajkit.gaze import FixationConfig, GazeSample, detect_fixations, median_downsample
from trajkit.geodesy import LAT_MAX_DEG, GeoPoint, PlanePoint, from_mercator, to_mercator
from trajkit.pci import SyntheticSpec, discrete_frechet, generate_target, pci
from trajkit.trajectory import SamplerConfig, sliding_windows

from conftest import straight_track, uniform_trajectory
from test_correction import natural_spline_oracle
from test_gaze import fixations_oracle, random_stream
from test_pci import frechet_bruteforce

FIXTURES = Path(__file__).parent / "fixtures"


def criterion(name):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[FAIL] {name}")
                raise
            print(f"[PASS] {name}")

        return wrapper

    return deco


@criterion("frechet oracle equivalence (1000 random pairs, len <= 6, < 5 s)")
def test_frechet_oracle_equivalence():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    for _ in range(1000):
        m, n = rng.integers(1, 7, size=2)
        P = rng.uniform(-1000.0, 1000.0, size=(m, 2))
        Q = rng.uniform(-1000.0, 1000.0, size=(n, 2))
        assert abs(discrete_frechet(P, Q) - frechet_bruteforce(P, Q)) <= 1e-9
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"took {elapsed:.2f}s"


@criterion("pci zero law (200 constant-velocity continuations)")
def test_pci_zero_law():
    rng = np.random.default_rng(7)
    for _ in range(200):
        speed = rng.uniform(0.0, 30.0)
        heading = rng.uniform(-math.pi, math.pi)
        start = rng.uniform(-1e5, 1e5, size=2)
        full = straight_track(70, speed=speed, heading=heading, start=tuple(start))
        inp = full.slice(0, 40)
        tgt = full.slice(40, 70)
        assert pci(inp, tgt).value <= 1e-9


@criterion("linear-baseline identity (pci == frechet vs baseline, exact)")
def test_linear_baseline_identity():
    rng = np.random.default_rng(11)
    pts = np.cumsum(rng.uniform(-2.5, 2.5, size=(301, 2)), axis=0)
    track = uniform_trajectory(pts)
    windows = sliding_windows(track, SamplerConfig())
    assert len(windows) == 24
    for w in windows:
        lhs = pci(w.input, w.target).value
        rhs = discrete_frechet(w.target.points, baseline_linear(w).points)
        assert lhs == rhs


@criterion("discount-weight claim (0.97^30 == 0.4010 within 1e-4)")
def test_discount_weight_claim():
    weights = discount_weights(0.97, 30)
    assert abs(weights[-1] - 0.4010) <= 1e-4
    assert abs(weights[-1] - 0.97**30) == 0.0


@criterion("auxiliary-proportion law (1000 random triples within 1e-12)")
def test_auxiliary_proportion_law():
    rng = np.random.default_rng(13)
    for _ in range(1000):
        loss_t = float(rng.uniform(1e-9, 1e9))
        loss_v = float(rng.uniform(1e-9, 1e9))
        rho = float(rng.uniform(0.0, 10.0))
        alpha = auxiliary_weight(loss_t, loss_v, rho)
        assert abs(alpha * loss_v / loss_t - rho) <= 1e-12 * max(1.0, rho)


@criterion("ade/fde hand cases and loop oracles (1e-12)")
def test_ade_fde_cases():
    t0 = uniform_trajectory([[0.0, 0.0], [1.0, 0.0]])
    z2 = uniform_trajectory([[0.0, 0.0], [0.0, 0.0]])
    assert ade(t0, z2) == 0.5
    t1 = uniform_trajectory([[0.0, 0.0], [3.0, 4.0]])
    assert fde(t1, z2) == 5.0
    t2 = uniform_trajectory([[2.0, 2.0], [4.0, 1.0]])
    assert ade(t2, t2) == 0.0 and fde(t2, t2) == 0.0
    rng = np.random.default_rng(17)
    for _ in range(200):
        n = int(rng.integers(1, 60))
        p = rng.uniform(-1e3, 1e3, size=(n, 2))
        g = rng.uniform(-1e3, 1e3, size=(n, 2))
        expected_ade = sum(math.hypot(*(p[i] - g[i])) for i in range(n)) / n
        expected_fde = math.hypot(*(p[-1] - g[-1]))
        assert abs(ade(uniform_trajectory(p), uniform_trajectory(g)) - expected_ade) <= 1e-12
        assert abs(fde(uniform_trajectory(p), uniform_trajectory(g)) - expected_fde) <= 1e-12


@criterion("synthetic-generator ordering (strict in turn angle and speed)")
def test_generator_ordering():
    fps = 5.0
    speed = 10.0
    inp = straight_track(40, speed=speed, fps=fps)
    end = PlanePoint(*inp.points[-1])
    angles = (0.0, 30.0, 60.0, 90.0, 135.0, 180.0)
    by_angle = [
        pci(inp, generate_target(end, 0.0, SyntheticSpec(speed, a), fps)).value for a in angles
    ]
    assert all(b > a for a, b in zip(by_angle, by_angle[1:])), by_angle
    by_speed = []
    for s in (5.0, 10.0, 20.0, 40.0):
        matched_input = straight_track(40, speed=s, fps=fps)
        target = generate_target(
            PlanePoint(*matched_input.points[-1]), 0.0, SyntheticSpec(s, 90.0), fps
        )
        by_speed.append(pci(matched_input, target).value)
    assert all(b > a for a, b in zip(by_speed, by_speed[1:])), by_speed


@criterion("window-count formula (14 s / 16 s / 13.8 s -> 1 / 2 / 0)")
def test_window_count_formula():
    cfg = SamplerConfig()
    for secs, expected in ((14.0, 1), (16.0, 2), (13.8, 0)):
        n = round(secs * cfg.fps) + 1
        assert len(sliding_windows(straight_track(n), cfg)) == expected


@criterion("fixation oracle equivalence (500 random 200 Hz streams, bounds verified)")
def test_fixation_oracle_equivalence():
    cfg = FixationConfig()
    rng = np.random.default_rng(99)
    total = 0
    for _ in range(500):
        stream = random_stream(rng, n=2000)  # 10 s at 200 Hz
        fixations = detect_fixations(stream, cfg)
        got = [(f.start_ms, f.end_ms, f.cx, f.cy, f.sample_count) for f in fixations]
        assert got == fixations_oracle(stream, cfg)
        xs = np.array([s.x for s in stream])
        ys = np.array([s.y for s in stream])
        ts = np.array([s.timestamp_ms for s in stream])
        for f in fixations:
            assert cfg.min_duration_ms <= f.duration_ms <= cfg.max_duration_ms
            sel = (ts >= f.start_ms) & (ts <= f.end_ms)
            spread_deg = (
                (xs[sel].max() - xs[sel].min()) + (ys[sel].max() - ys[sel].min())
            ) * cfg.deg_per_pixel
            assert spread_deg <= cfg.dispersion_deg + 1e-9
        total += len(fixations)
    assert total > 0


@criterion("spline correctness (knots 1e-9, natural ends 1e-6, C2 1e-6 vs tridiagonal oracle)")
def test_spline_correctness():
    from trajkit.correction import Marker, NaturalCubicSpline, spline_correct

    rng = np.random.default_rng(21)
    knot_t = np.sort(rng.choice(np.arange(0, 20001, 200), size=9, replace=False)).astype(int)
    knot_y = rng.uniform(-50.0, 50.0, size=(9, 2))
    markers = [Marker(int(t), PlanePoint(*y)) for t, y in zip(knot_t, knot_y)]

    out = spline_correct(markers, knot_t)
    knot_err = np.hypot(*(out.points - knot_y).T)
    assert np.max(knot_err) <= 1e-9

    q = np.arange(knot_t[0], knot_t[-1] + 1, 67)
    got = spline_correct(markers, q).points
    expected = natural_spline_oracle(knot_t.astype(float), knot_y, q.astype(float))
    assert np.max(np.abs(got - expected)) <= 1e-9

    # smoothness probed through evaluated values: symmetric stencils are
    # exact for cubics, linear extrapolation recovers one-sided limits
    spline = NaturalCubicSpline(knot_t.astype(float), knot_y)

    def fd2(x, delta=2.0):
        v = spline(np.array([x - delta, x, x + delta]))
        return (v[0] - 2.0 * v[1] + v[2]) / delta**2

    def one_sided(knot, side, eps=4.0):
        return 2.0 * fd2(knot + side * eps) - fd2(knot + side * 2 * eps)

    scale = max(float(np.max(np.abs(spline.m2))), 1e-12)
    for knot in knot_t[1:-1]:
        gap = np.abs(one_sided(knot, -1) - one_sided(knot, +1))
        assert np.max(gap) <= 1e-6 * scale
    assert np.max(np.abs(one_sided(knot_t[0], +1))) <= 1e-6 * scale
    assert np.max(np.abs(one_sided(knot_t[-1], -1))) <= 1e-6 * scale


@criterion("geodesy round trip (1e5 random points within 1e-9 degrees)")
def test_geodesy_round_trip():
    rng = np.random.default_rng(31)
    lats = rng.uniform(-LAT_MAX_DEG, LAT_MAX_DEG, size=100_000)
    lons = rng.uniform(-180.0, 180.0, size=100_000)
    worst = 0.0
    for lat, lon in zip(lats, lons):
        g = from_mercator(to_mercator(GeoPoint(lat, lon)))
        worst = max(worst, abs(g.lat - lat), abs(g.lon - lon))
    assert worst <= 1e-9, f"worst deviation {worst}"


@criterion("median-downsample robustness (49% adversarial outliers)")
def test_median_downsample_robustness():
    rng = np.random.default_rng(41)
    for n in (3, 4, 7, 10, 16, 25, 33, 100):
        k = int(0.49 * n)
        for _ in range(20):
            values = np.concatenate([np.full(n - k, 42.5), rng.uniform(-1e9, 1e9, size=k)])
            rng.shuffle(values)
            stream = [GazeSample(i, float(v), float(-v)) for i, v in enumerate(values)]
            out = median_downsample(stream, 1.0)
            assert len(out) == 1
            assert out[0].x == 42.5 and out[0].y == -42.5


@criterion("cli end-to-end byte stability (pci / eval / fixations / correct)")
def test_cli_byte_stability(tmp_path):
    runner = CliRunner()

    def run_all(tag):
        d = tmp_path / tag
        d.mkdir()
        invocations = [
            ["pci", "--track", str(FIXTURES / "track.csv"),
             "--out", str(d / "windows.csv"), "--profile-out", str(d / "profile.csv")],
            ["eval", "--session", str(FIXTURES / "session.json"),
             "--pred", str(FIXTURES / "predictions.csv"), "--json-out", str(d / "report.json")],
            ["fixations", "--gaze", str(FIXTURES / "gaze.csv"), "--out", str(d / "fixations.csv")],
            ["correct", "--track", str(FIXTURES / "track.csv"),
             "--markers", str(FIXTURES / "markers.json"), "--out", str(d / "corrected.csv"),
             "--centerlines", str(FIXTURES / "centerlines.geojson"),
             "--histogram-out", str(d / "hist.csv")],
        ]
        stdout = []
        for args in invocations:
            result = runner.invoke(cli_main, args, catch_exceptions=False)
            assert result.exit_code == 0, result.output
            stdout.append(result.output.replace(str(d), "<OUT>"))
        files = {p.name: p.read_bytes() for p in sorted(d.iterdir())}
        return files, stdout

    first_files, first_out = run_all("run1")
    second_files, second_out = run_all("run2")
    assert set(first_files) == {
        "windows.csv", "profile.csv", "report.json", "fixations.csv", "corrected.csv", "hist.csv",
    }
    assert first_files == second_files
    assert first_out == second_out
