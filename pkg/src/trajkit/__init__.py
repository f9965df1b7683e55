"""Trajectory toolkit: path-complexity scoring, forecast metrics, gaze
fixation detection, and marker-based GPS track correction."""

from .correction import Centerline, Marker, NaturalCubicSpline, distance_to_centerline, noise_histogram, spline_correct
from .evaluation import (
    LossConfig,
    SampleResult,
    ade,
    auxiliary_weight,
    baseline_linear,
    baseline_stationary,
    combined_loss,
    fde,
    fde_at,
    future_discounted_loss,
    report,
)
from .gaze import Fixation, FixationConfig, GazeSample, detect_fixations, inject_noise, median_downsample
from .geodesy import GeoPoint, MotionDelta, PlanePoint, from_deltas, from_mercator, to_deltas, to_mercator
from .pci import CurvatureProfile, PciResult, SyntheticSpec, discrete_frechet, generate_target, pci, pci_profile, simple_extrapolation
from .trajectory import SamplerConfig, Trajectory, WindowPair, resample, sliding_windows, speed_profile

__version__ = "0.1.0"
