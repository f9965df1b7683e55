import math

import numpy as np
import pytest

from trajkit.evaluation import (
    LossConfig,
    SampleResult,
    ade,
    auxiliary_weight,
    baseline_linear,
    baseline_stationary,
    combined_loss,
    discount_weights,
    fde,
    fde_at,
    future_discounted_loss,
    report,
)
from trajkit.pci import discrete_frechet, pci, simple_extrapolation
from trajkit.trajectory import SamplerConfig, Trajectory, WindowPair, sliding_windows

from conftest import straight_track, uniform_trajectory


def _traj(points, start_ms=0):
    return uniform_trajectory(np.asarray(points, dtype=np.float64), start_ms=start_ms)


def _random_window(rng, n_in=40, n_tgt=30):
    pts = np.cumsum(rng.uniform(-3, 3, size=(n_in + n_tgt, 2)), axis=0)
    track = uniform_trajectory(pts)
    inp = track.slice(0, n_in)
    tgt = track.slice(n_in, n_in + n_tgt)
    return WindowPair(inp, tgt, anchor_time=int(inp.timestamps[-1]))


class TestDisplacement:
    def test_ade_hand_case(self):
        pred = _traj([[0.0, 0.0], [1.0, 0.0]])
        gt = _traj([[0.0, 0.0], [0.0, 0.0]])
        assert ade(pred, gt) == 0.5

    def test_ade_zero_on_equal(self):
        t = _traj([[1.0, 2.0], [3.0, 4.0]])
        assert ade(t, t) == 0.0

    def test_fde_hand_case(self):
        pred = _traj([[0.0, 0.0], [3.0, 4.0]])
        gt = _traj([[0.0, 0.0], [0.0, 0.0]])
        assert fde(pred, gt) == 5.0

    def test_fde_equals_ade_for_single_step(self):
        pred = Trajectory(np.array([0]), np.array([[2.0, 0.0]]))
        gt = Trajectory(np.array([0]), np.array([[0.0, 0.0]]))
        assert fde(pred, gt) == ade(pred, gt) == 2.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            ade(_traj([[0.0, 0.0]]), _traj([[0.0, 0.0], [1.0, 1.0]]))

    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(25):
            n = int(rng.integers(1, 40))
            p = rng.uniform(-100, 100, size=(n, 2))
            g = rng.uniform(-100, 100, size=(n, 2))
            pred, gt = _traj(p), _traj(g)
            expect_ade = sum(
                math.hypot(p[i, 0] - g[i, 0], p[i, 1] - g[i, 1]) for i in range(n)
            ) / n
            expect_fde = math.hypot(p[-1, 0] - g[-1, 0], p[-1, 1] - g[-1, 1])
            assert ade(pred, gt) == pytest.approx(expect_ade, abs=1e-12)
            assert fde(pred, gt) == pytest.approx(expect_fde, abs=1e-12)

    def test_rigid_motion_invariance(self):
        rng = np.random.default_rng(2)
        p = rng.uniform(-10, 10, size=(30, 2))
        g = rng.uniform(-10, 10, size=(30, 2))
        theta = 0.77
        rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
        shift = np.array([123.0, -456.0])
        assert ade(_traj(p @ rot.T + shift), _traj(g @ rot.T + shift)) == pytest.approx(
            ade(_traj(p), _traj(g)), abs=1e-9
        )
        assert fde(_traj(p @ rot.T + shift), _traj(g @ rot.T + shift)) == pytest.approx(
            fde(_traj(p), _traj(g)), abs=1e-9
        )


class TestFdeAt:
    def test_final_horizon_equals_fde(self):
        rng = np.random.default_rng(3)
        pred = _traj(rng.uniform(-5, 5, size=(30, 2)))
        gt = _traj(rng.uniform(-5, 5, size=(30, 2)))
        assert fde_at(pred, gt, 6.0, 5.0) == fde(pred, gt)

    def test_one_second_horizon_is_step_five(self):
        p = np.zeros((30, 2))
        g = np.zeros((30, 2))
        g[4, 0] = 7.0  # 1-based step 5
        assert fde_at(_traj(p), _traj(g), 1.0, 5.0) == 7.0

    def test_beyond_length_rejected(self):
        pred, gt = _traj(np.zeros((10, 2))), _traj(np.zeros((10, 2)))
        with pytest.raises(ValueError):
            fde_at(pred, gt, 6.0, 5.0)

    def test_non_integral_step_rejected(self):
        pred, gt = _traj(np.zeros((30, 2))), _traj(np.zeros((30, 2)))
        with pytest.raises(ValueError):
            fde_at(pred, gt, 0.3, 5.0)

    def test_monotone_for_diverging_prediction(self):
        gt = straight_track(30, speed=10.0)
        drift = np.cumsum(np.tile([0.0, 0.5], (30, 1)), axis=0)
        pred = _traj(gt.points + drift)
        values = [fde_at(pred, gt, h, 5.0) for h in (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)]
        assert all(b > a for a, b in zip(values, values[1:]))


class TestFutureDiscountedLoss:
    def test_unit_error_geometric_series(self):
        n, gamma = 30, 0.97
        pred = np.ones((n, 2)) * [1.0, 0.0]
        gt = np.zeros((n, 2))
        expected = sum(gamma**i for i in range(1, n + 1))  # independent loop oracle
        assert future_discounted_loss(pred, gt, gamma) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(19.3674, abs=5e-5)

    def test_final_step_weight_claim(self):
        w = discount_weights(0.97, 30)
        assert w[-1] == pytest.approx(0.4010, abs=1e-4)

    def test_error_only_at_first_step(self):
        pred = np.zeros((5, 2))
        gt = np.zeros((5, 2))
        pred[0] = [3.0, 4.0]
        gamma = 0.9
        assert future_discounted_loss(pred, gt, gamma) == pytest.approx(gamma * 25.0, rel=1e-12)

    def test_near_one_approaches_undiscounted(self):
        rng = np.random.default_rng(4)
        pred = rng.uniform(-2, 2, size=(30, 2))
        gt = rng.uniform(-2, 2, size=(30, 2))
        sse = float(np.sum((pred - gt) ** 2))
        loss = future_discounted_loss(pred, gt, 1 - 1e-9)
        assert loss == pytest.approx(sse, rel=1e-4)

    def test_scalar_sequences_accepted(self):
        assert future_discounted_loss([1.0], [0.0], 0.5) == pytest.approx(0.5)

    def test_mismatch_rejected(self):
        with pytest.raises(ValueError):
            future_discounted_loss(np.zeros((3, 2)), np.zeros((4, 2)), 0.9)

    def test_gamma_domain(self):
        with pytest.raises(ValueError):
            discount_weights(1.0, 5)
        with pytest.raises(ValueError):
            LossConfig(gamma=0.0)


class TestAuxiliaryWeight:
    def test_direct_substitution(self):
        alpha = auxiliary_weight(2.0, 4.0, 0.5)
        assert alpha == 0.25
        assert combined_loss(2.0, 4.0, 0.5) == 3.0

    def test_zero_ratio(self):
        assert combined_loss(7.0, 123.0, 0.0) == 7.0

    def test_zero_auxiliary_contributes_nothing(self):
        assert auxiliary_weight(3.0, 0.0, 0.5) == 0.0
        assert combined_loss(3.0, 0.0, 0.5) == 3.0

    def test_ratio_law(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            lt, lv, rho = rng.uniform(1e-6, 1e6, size=3)
            alpha = auxiliary_weight(lt, lv, rho)
            assert alpha * lv / lt == pytest.approx(rho, rel=1e-12)


class TestBaselines:
    def test_stationary_repeats_last_point(self):
        rng = np.random.default_rng(6)
        w = _random_window(rng)
        pred = baseline_stationary(w)
        np.testing.assert_array_equal(pred.points, np.tile(w.input.points[-1], (30, 1)))
        np.testing.assert_array_equal(pred.timestamps, w.target.timestamps)

    def test_stationary_perfect_for_stationary_gt(self):
        track = uniform_trajectory(np.tile([5.0, 5.0], (71, 1)))
        w = sliding_windows(track, SamplerConfig())[0]
        pred = baseline_stationary(w)
        assert ade(pred, w.target) == 0.0 and fde(pred, w.target) == 0.0

    def test_stationary_fde_for_constant_speed(self):
        v = 4.0
        track = straight_track(71, speed=v)
        w = sliding_windows(track, SamplerConfig())[0]
        pred = baseline_stationary(w)
        assert fde(pred, w.target) == pytest.approx(6.0 * v, rel=1e-12)

    def test_linear_perfect_for_constant_velocity(self):
        track = straight_track(71, speed=7.0)
        w = sliding_windows(track, SamplerConfig())[0]
        pred = baseline_linear(w)
        assert ade(pred, w.target) == pytest.approx(0.0, abs=1e-9)

    def test_linear_equals_simple_extrapolation(self):
        rng = np.random.default_rng(7)
        w = _random_window(rng)
        assert baseline_linear(w) == simple_extrapolation(w.input, len(w.target))

    def test_linear_fde_on_right_angle_turn(self):
        # drive east for the input, turn hard north for the target
        fps, speed = 5.0, 5.0
        step = speed / fps
        deltas = np.concatenate([np.tile([step, 0.0], (40, 1)), np.tile([0.0, step], (30, 1))])
        pts = np.concatenate([[[0.0, 0.0]], deltas]).cumsum(axis=0)  # 71 points
        track = uniform_trajectory(pts)
        w = sliding_windows(track, SamplerConfig())[0]
        pred = baseline_linear(w)
        # geometry oracle: input ends at x=39*step heading east, so its
        # extrapolation ends at x=69*step; the true endpoint sits at
        # (40*step, 29*step) after the corner.
        gap = math.hypot(69 * step - 40 * step, 29 * step)
        assert fde(pred, w.target) == pytest.approx(gap, rel=1e-12)

    def test_pci_equals_frechet_of_linear_baseline(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            w = _random_window(rng)
            lhs = pci(w.input, w.target).value
            rhs = discrete_frechet(w.target.points, baseline_linear(w).points)
            assert lhs == rhs

    def test_pci_of_linear_baseline_prediction_is_exactly_zero(self):
        # the linear baseline IS the simple trajectory, so its complexity is 0.0
        rng = np.random.default_rng(9)
        for _ in range(10):
            w = _random_window(rng)
            assert pci(w.input, baseline_linear(w)).value == 0.0


class TestReport:
    def _sample(self, wid, ade_v, pci_v, fde_v=1.0):
        return SampleResult(window_id=wid, ade=ade_v, fde=fde_v, pci=pci_v)

    def test_all_below_threshold_filtered_absent(self):
        rep = report([self._sample(0, 3.0, 5.0)], pci_threshold=20.0)
        assert rep.filtered is None
        assert rep.overall.count == 1

    def test_single_qualifying_sample(self):
        rep = report([self._sample(0, 3.0, 25.0)], pci_threshold=20.0)
        assert rep.filtered.count == 1
        assert rep.filtered.mean_ade == 3.0

    def test_filtered_mean_matches_subset_oracle(self):
        rng = np.random.default_rng(9)
        samples = [
            self._sample(i, float(rng.uniform(0, 10)), float(rng.uniform(0, 60)))
            for i in range(40)
        ]
        rep = report(samples, pci_threshold=20.0)
        qualifying = [s.ade for s in samples if s.pci >= 20.0]
        assert rep.filtered.count == len(qualifying)
        assert rep.filtered.mean_ade == pytest.approx(np.mean(qualifying), rel=1e-12)

    def test_threshold_is_inclusive(self):
        rep = report([self._sample(0, 1.0, 20.0)], pci_threshold=20.0)
        assert rep.filtered is not None and rep.filtered.count == 1

    def test_bin_counts_partition_samples(self):
        samples = [self._sample(i, 1.0, p) for i, p in enumerate([0.0, 9.9, 10.0, 25.0, 39.9, 40.0, 100.0])]
        rep = report(samples)
        assert [b.count for b in rep.bins] == [2, 1, 2, 2]
        assert sum(b.count for b in rep.bins) == len(samples)
        assert rep.bins[0].lo == 0.0 and math.isinf(rep.bins[-1].hi)

    def test_empty_bins_have_absent_means(self):
        rep = report([self._sample(0, 1.0, 5.0)])
        assert rep.bins[2].count == 0 and rep.bins[2].mean_ade is None

    def test_samples_sorted_by_bin_then_window(self):
        samples = [self._sample(3, 1.0, 50.0), self._sample(1, 1.0, 5.0), self._sample(2, 1.0, 5.0)]
        rep = report(samples)
        assert [s.window_id for s in rep.samples] == [1, 2, 3]

    def test_empty_report(self):
        rep = report([])
        assert rep.overall is None and rep.filtered is None

    def test_to_dict_round_trips_through_json(self):
        import json

        rep = report([self._sample(0, 1.0, 25.0, fde_v=2.0)])
        blob = json.dumps(rep.to_dict())
        back = json.loads(blob)
        assert back["filtered"]["count"] == 1
        assert back["bins"][-1]["hi"] is None
