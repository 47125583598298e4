"""Polarity detection from the phase shift between two oscillating moments.

The odd moment (default y_11) flips sign with the speech polarity while the
even moment (default y_12) does not, so the lag between them, expressed as a
fraction of the local pitch period, separates the two polarities.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateFrameError, InsufficientFramesError, UnreliableFrameError
from .moments import MomentSignal, MomentSpec, compute_oscillating_moment
from .pitch import F0_MAX_HZ, F0_MIN_HZ, HOP_S, analyze_pitch, local_t0, _parabolic_refine
from .signal_core import AudioSignal, Polarity

# Positive-polarity decision interval for the phase shift, in fractions of
# the local pitch period (half-open, so the two classes partition the circle).
SHIFT_LOW = -0.12
SHIFT_HIGH = 0.38

DEGENERATE_RMS = 1e-12


@dataclass(frozen=True)
class OMPDConfig:
    """Tunable constants of the detector; defaults follow the method."""

    shift_low: float = SHIFT_LOW
    shift_high: float = SHIFT_HIGH
    hop_s: float = HOP_S
    f0_min: float = F0_MIN_HZ
    f0_max: float = F0_MAX_HZ
    odd_spec: MomentSpec = field(default_factory=lambda: MomentSpec(1, 1))
    even_spec: MomentSpec = field(default_factory=lambda: MomentSpec(1, 2))

    def __post_init__(self):
        if not self.odd_spec.polarity_dependent:
            raise ValueError("odd_spec must have an odd p1*p2 product")
        if self.even_spec.polarity_dependent:
            raise ValueError("even_spec must have an even p1*p2 product")
        if abs(self.shift_high - self.shift_low - 0.5) > 1e-9:
            # the interval must cover exactly half the circle so that a
            # polarity flip (a 0.5 displacement) flips every vote
            raise ValueError("shift interval must have length 0.5")


@dataclass(frozen=True)
class FrameDecision:
    time_s: float
    phase_shift: float  # fraction of local T0, in [-0.5, 0.5)
    local_t0_s: float
    vote: Polarity


@dataclass(frozen=True)
class PolarityResult:
    label: Polarity
    confidence: float  # fraction of frames voting with the winning label
    n_frames: int
    tie: bool = False

    def __post_init__(self):
        if self.n_frames < 1:
            raise ValueError("n_frames must be >= 1")
        if not 0.5 <= self.confidence <= 1.0:
            raise ValueError("confidence must be in [0.5, 1]")


def wrap_shift(x: float) -> float:
    """Wrap a phase shift (in periods) into [-0.5, 0.5)."""
    return float((x + 0.5) % 1.0 - 0.5)


def phase_shift_at(
    y_odd: MomentSignal, y_even: MomentSignal, t: int, local_t0_s: float
) -> float:
    """Lag of y_odd relative to y_even at sample t, as a fraction of T0.

    Maximizes the normalized cross-correlation over a window of two local
    periods centered at t; positive values mean y_odd is delayed. The
    integer-lag peak is refined parabolically and wrapped into [-0.5, 0.5).
    """
    if len(y_odd) != len(y_even) or y_odd.sample_rate_hz != y_even.sample_rate_hz:
        raise ValueError("moment signals must share length and sample rate")
    sr = y_odd.sample_rate_hz
    t0 = local_t0_s * sr
    period = int(round(t0))
    half = period  # window of 2 periods
    lag_max = period // 2
    if t - half - lag_max < 0 or t + half + lag_max > len(y_odd):
        raise ValueError(f"t={t} is closer than 1.5 periods to a signal edge")

    a = y_odd.values[t - half : t + half]
    context = y_even.values[t - half - lag_max : t + half + lag_max]
    if (
        np.sqrt(np.mean(a * a)) < DEGENERATE_RMS
        or np.sqrt(np.mean(context * context)) < DEGENERATE_RMS
    ):
        raise DegenerateFrameError("window is numerically silent")

    # corr[i] pairs a with y_even delayed by lag = lag_max - i
    corr = np.correlate(context, a, mode="valid")
    sq = np.concatenate(([0.0], np.cumsum(context * context)))
    energies = sq[np.arange(corr.size) + a.size] - sq[np.arange(corr.size)]
    e_a = np.dot(a, a)
    with np.errstate(invalid="ignore", divide="ignore"):
        nxc = np.where(energies > 0.0, corr / np.sqrt(e_a * energies), 0.0)

    best = int(np.argmax(nxc))
    refined_idx = _parabolic_refine(nxc, best)
    lag = lag_max - refined_idx
    return wrap_shift(lag / t0)


def classify_frame(
    phase_shift: float, low: float = SHIFT_LOW, high: float = SHIFT_HIGH
) -> Polarity:
    """Positive polarity iff the shift lies in [low, high)."""
    return Polarity.POSITIVE if low <= phase_shift < high else Polarity.NEGATIVE


def _majority(votes: list[Polarity]) -> PolarityResult:
    n_pos = sum(1 for v in votes if v is Polarity.POSITIVE)
    n = len(votes)
    if n == 0:
        raise InsufficientFramesError("no frames produced votes")
    n_neg = n - n_pos
    if n_pos == n_neg:
        return PolarityResult(Polarity.POSITIVE, 0.5, n, tie=True)
    label = Polarity.POSITIVE if n_pos > n_neg else Polarity.NEGATIVE
    return PolarityResult(label, max(n_pos, n_neg) / n, n)


def detect_polarity_ompd(
    signal: AudioSignal, config: OMPDConfig | None = None
) -> tuple[PolarityResult, list[FrameDecision]]:
    """Full detector: moments, per-frame phase shifts, majority vote."""
    config = config or OMPDConfig()
    sr = signal.sample_rate_hz
    info = analyze_pitch(signal, config.f0_min, config.f0_max)
    t0m = info.t0_mean_s
    y_odd = compute_oscillating_moment(signal, config.odd_spec, t0m)
    y_even = compute_oscillating_moment(signal, config.even_spec, t0m)

    hop = int(round(config.hop_s * sr))
    margin = int(np.ceil(1.5 * t0m * sr))
    edge = int(np.ceil(2.0 * t0m * sr))
    decisions: list[FrameDecision] = []
    for region in info.voiced_regions:
        first = max(region.start_sample + margin, edge)
        last = min(region.end_sample - margin, len(signal) - edge)
        for t in range(((first + hop - 1) // hop) * hop, last, hop):
            try:
                t0_local = local_t0(y_odd, t, t0m)
            except UnreliableFrameError:
                continue
            lo = int(np.ceil(1.5 * t0_local * sr))
            if t - lo < 0 or t + lo > len(signal):
                continue
            if t - lo < region.start_sample or t + lo > region.end_sample:
                continue
            try:
                shift = phase_shift_at(y_odd, y_even, t, t0_local)
            except DegenerateFrameError:
                continue
            vote = classify_frame(shift, config.shift_low, config.shift_high)
            decisions.append(FrameDecision(t / sr, shift, t0_local, vote))
    result = _majority([d.vote for d in decisions])
    return result, decisions
