"""Displacement metrics, discounted loss scoring, naive baselines, and reporting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .pci import simple_extrapolation
from .trajectory import Trajectory, WindowPair

# Complexity bins used for stratified reporting; the headline filter keeps
# windows of 20 m complexity or more.
PCI_BINS: tuple[tuple[float, float], ...] = ((0.0, 10.0), (10.0, 20.0), (20.0, 40.0), (40.0, math.inf))
DEFAULT_PCI_THRESHOLD = 20.0


@dataclass(frozen=True)
class LossConfig:
    """Discount factor and auxiliary-loss ratio for scoring."""

    gamma: float = 0.97
    rho_v: float = 0.5

    def __post_init__(self):
        if not (0.0 < self.gamma < 1.0):
            raise ValueError(f"gamma must be in (0, 1), got {self.gamma}")
        if not (math.isfinite(self.rho_v) and self.rho_v >= 0.0):
            raise ValueError(f"rho_v must be >= 0, got {self.rho_v}")


def _paired_points(pred: Trajectory, gt: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    if len(pred) != len(gt):
        raise ValueError(f"prediction has {len(pred)} points but ground truth has {len(gt)}")
    return pred.points, gt.points


def ade(pred: Trajectory, gt: Trajectory) -> float:
    """Mean Euclidean displacement over all prediction steps."""
    p, g = _paired_points(pred, gt)
    return float(np.mean(np.hypot(p[:, 0] - g[:, 0], p[:, 1] - g[:, 1])))


def fde(pred: Trajectory, gt: Trajectory) -> float:
    """Euclidean displacement at the final prediction step."""
    p, g = _paired_points(pred, gt)
    return float(np.hypot(p[-1, 0] - g[-1, 0], p[-1, 1] - g[-1, 1]))


def fde_at(pred: Trajectory, gt: Trajectory, horizon_secs: float, fps: float) -> float:
    """Displacement at a fixed horizon: 1-based step index horizon * fps."""
    p, g = _paired_points(pred, gt)
    idx = horizon_secs * fps
    if abs(idx - round(idx)) > 1e-9:
        raise ValueError(f"horizon {horizon_secs}s is not a whole step at {fps} fps")
    k = round(idx)
    if not 1 <= k <= len(p):
        raise ValueError(f"horizon {horizon_secs}s is step {k}, outside 1..{len(p)}")
    return float(np.hypot(p[k - 1, 0] - g[k - 1, 0], p[k - 1, 1] - g[k - 1, 1]))


def discount_weights(gamma: float, n: int) -> np.ndarray:
    """Per-step weights gamma^1 .. gamma^n."""
    if not (0.0 < gamma < 1.0):
        raise ValueError(f"gamma must be in (0, 1), got {gamma}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return gamma ** np.arange(1, n + 1, dtype=np.float64)


def future_discounted_loss(pred, gt, gamma: float) -> float:
    """Squared-error loss with per-step weight gamma^i, i = 1..N.

    Steps may be scalars or coordinate vectors; the per-step error is the
    squared Euclidean norm of the difference, so later steps contribute
    geometrically less.
    """
    p = np.asarray(pred, dtype=np.float64)
    g = np.asarray(gt, dtype=np.float64)
    if p.shape != g.shape:
        raise ValueError(f"shape mismatch: {p.shape} vs {g.shape}")
    if p.ndim == 1:
        p = p[:, None]
        g = g[:, None]
    if p.ndim != 2 or len(p) < 1:
        raise ValueError(f"expected (n,) or (n, d) sequences, got shape {p.shape}")
    sq = np.sum((p - g) ** 2, axis=1)
    return float(np.dot(discount_weights(gamma, len(sq)), sq))


def auxiliary_weight(loss_t: float, loss_v: float, rho_v: float) -> float:
    """Scale for an auxiliary loss so it stays a fixed fraction of the primary.

    Returns alpha such that alpha * loss_v == rho_v * loss_t. A zero
    auxiliary loss gets weight 0 (that branch contributes nothing).
    """
    if loss_v < 0 or loss_t < 0:
        raise ValueError("losses must be non-negative")
    if rho_v < 0:
        raise ValueError(f"rho_v must be >= 0, got {rho_v}")
    if loss_v == 0.0:
        return 0.0
    return rho_v * loss_t / loss_v


def combined_loss(loss_t: float, loss_v: float, rho_v: float) -> float:
    """Primary loss plus the ratio-balanced auxiliary term."""
    return loss_t + auxiliary_weight(loss_t, loss_v, rho_v) * loss_v


def baseline_stationary(window: WindowPair) -> Trajectory:
    """Predict that the vehicle stays at the input's last position."""
    last = window.input.points[-1]
    n = len(window.target)
    return Trajectory(window.target.timestamps, np.tile(last, (n, 1)))


def baseline_linear(window: WindowPair) -> Trajectory:
    """Predict constant final velocity; identical to the simple extrapolation."""
    return simple_extrapolation(window.input, len(window.target))


@dataclass(frozen=True)
class SampleResult:
    """Per-window metrics: displacement errors plus the window's complexity."""

    window_id: int
    ade: float
    fde: float
    pci: float
    fde_at: dict[float, float] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("ade", "fde", "pci"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")


@dataclass(frozen=True)
class Aggregate:
    count: int
    mean_ade: float
    mean_fde: float
    mean_fde_at: dict[float, float] = field(default_factory=dict)


@dataclass(frozen=True)
class BinAggregate:
    lo: float
    hi: float
    count: int
    mean_ade: float | None
    mean_fde: float | None


@dataclass(frozen=True)
class EvalReport:
    """Aggregated metrics: overall, complexity-filtered, and per-bin."""

    pci_threshold: float
    overall: Aggregate | None
    filtered: Aggregate | None
    bins: tuple[BinAggregate, ...]
    samples: tuple[SampleResult, ...]

    def to_dict(self) -> dict:
        def agg(a: Aggregate | None) -> dict | None:
            if a is None:
                return None
            out = {"count": a.count, "mean_ade": a.mean_ade, "mean_fde": a.mean_fde}
            if a.mean_fde_at:
                out["mean_fde_at"] = {str(h): v for h, v in sorted(a.mean_fde_at.items())}
            return out

        return {
            "pci_threshold": self.pci_threshold,
            "overall": agg(self.overall),
            "filtered": agg(self.filtered),
            "bins": [
                {
                    "lo": b.lo,
                    "hi": None if math.isinf(b.hi) else b.hi,
                    "count": b.count,
                    "mean_ade": b.mean_ade,
                    "mean_fde": b.mean_fde,
                }
                for b in self.bins
            ],
            "samples": [
                {
                    "window_id": s.window_id,
                    "ade": s.ade,
                    "fde": s.fde,
                    "pci": s.pci,
                    "fde_at": {str(h): v for h, v in sorted(s.fde_at.items())},
                }
                for s in self.samples
            ],
        }


def pci_bin_index(value: float, bins=PCI_BINS) -> int:
    for i, (lo, hi) in enumerate(bins):
        if lo <= value < hi:
            return i
    raise ValueError(f"complexity value {value} falls outside all bins")


def _aggregate(samples: list[SampleResult]) -> Aggregate | None:
    if not samples:
        return None
    horizons = set.intersection(*(set(s.fde_at) for s in samples)) if samples else set()
    mean_fde_at = {
        h: float(np.mean([s.fde_at[h] for s in samples])) for h in sorted(horizons)
    }
    return Aggregate(
        count=len(samples),
        mean_ade=float(np.mean([s.ade for s in samples])),
        mean_fde=float(np.mean([s.fde for s in samples])),
        mean_fde_at=mean_fde_at,
    )


def report(
    samples,
    pci_threshold: float = DEFAULT_PCI_THRESHOLD,
    bins=PCI_BINS,
) -> EvalReport:
    """Aggregate per-window results overall, above the complexity threshold, and per bin.

    Empty aggregates are reported as absent (None), never as zero. Samples
    are kept sorted by complexity bin then window id so serialized reports
    diff deterministically.
    """
    samples = sorted(samples, key=lambda s: (pci_bin_index(s.pci, bins), s.window_id))
    filtered = [s for s in samples if s.pci >= pci_threshold]
    bin_aggs = []
    for i, (lo, hi) in enumerate(bins):
        members = [s for s in samples if pci_bin_index(s.pci, bins) == i]
        agg = _aggregate(members)
        bin_aggs.append(
            BinAggregate(
                lo=lo,
                hi=hi,
                count=len(members),
                mean_ade=agg.mean_ade if agg else None,
                mean_fde=agg.mean_fde if agg else None,
            )
        )
    return EvalReport(
        pci_threshold=pci_threshold,
        overall=_aggregate(samples),
        filtered=_aggregate(filtered),
        bins=tuple(bin_aggs),
        samples=tuple(samples),
    )
