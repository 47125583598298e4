"""Dense oscillating-moment signals: sliding weighted moments of powered speech."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.signal import fftconvolve

from .errors import TooShortSignalError
from .signal_core import (
    AudioSignal,
    WindowCoefficients,
    highpass_40hz_values,
    make_blackman_window,
    nearest_odd,
)

MAX_ORDER = 4
T0_MEAN_MIN_S = 1.0 / 500.0
T0_MEAN_MAX_S = 1.0 / 50.0

# Window length in multiples of the mean pitch period: 1.75 for the
# mean-based signal, 2.5 for any higher order.
WINDOW_FACTOR_MEAN = 1.75
WINDOW_FACTOR_HIGHER = 2.5


def default_window_factor(p1: int, p2: int) -> float:
    return WINDOW_FACTOR_MEAN if (p1, p2) == (1, 1) else WINDOW_FACTOR_HIGHER


@dataclass(frozen=True)
class MomentSpec:
    """Statistical order p1 and non-linearity order p2, both in 1..4."""

    p1: int
    p2: int
    window_factor: float = field(default=0.0)

    def __post_init__(self):
        if not (1 <= self.p1 <= MAX_ORDER and 1 <= self.p2 <= MAX_ORDER):
            raise ValueError(
                f"orders must be in 1..{MAX_ORDER}, got p1={self.p1} p2={self.p2}"
            )
        if self.window_factor <= 0.0:
            object.__setattr__(
                self, "window_factor", default_window_factor(self.p1, self.p2)
            )

    @property
    def polarity_dependent(self) -> bool:
        return (self.p1 * self.p2) % 2 == 1


@dataclass(frozen=True)
class MomentSignal:
    """Per-sample oscillating moment on the same time base as its source."""

    values: np.ndarray
    spec: MomentSpec
    sample_rate_hz: int

    def __len__(self) -> int:
        return self.values.size


def _weighted_sliding_sums(padded: np.ndarray, window: np.ndarray) -> np.ndarray:
    # window is symmetric, so correlation == convolution
    return fftconvolve(padded, window, mode="valid")


def sliding_moment_values(
    powered: np.ndarray, window: WindowCoefficients, p1: int
) -> np.ndarray:
    """Fast per-sample weighted moment of `powered` under the sliding window.

    p1 = 1 gives the weighted mean; p1 >= 2 gives the weighted central
    moment, expanded binomially so every term is a single convolution.
    Edge samples see reflect-padded data.
    """
    powered = np.asarray(powered, dtype=np.float64)
    w = window.values
    if window.length >= powered.size:
        raise ValueError("window must be shorter than the input")
    wsum = w.sum()
    half = window.length // 2
    padded = np.pad(powered, half, mode="reflect")
    mean = _weighted_sliding_sums(padded, w) / wsum
    if p1 == 1:
        return mean
    out = np.zeros_like(mean)
    for j in range(p1 + 1):
        s_j = (
            np.ones_like(mean)
            if j == 0
            else _weighted_sliding_sums(np.pad(powered**j, half, mode="reflect"), w)
            / wsum
        )
        out += comb(p1, j) * s_j * (-mean) ** (p1 - j)
    return out


def sliding_moment_direct(
    powered: np.ndarray, window: WindowCoefficients, p1: int
) -> np.ndarray:
    """Brute-force reference for sliding_moment_values, one window per sample."""
    powered = np.asarray(powered, dtype=np.float64)
    if window.length >= powered.size:
        raise ValueError("window must be shorter than the input")
    w = window.values
    wsum = w.sum()
    half = window.length // 2
    padded = np.pad(powered, half, mode="reflect")
    out = np.empty(powered.size)
    for i in range(powered.size):
        seg = padded[i : i + window.length]
        mean = np.dot(seg, w) / wsum
        if p1 == 1:
            out[i] = mean
        else:
            out[i] = np.dot((seg - mean) ** p1, w) / wsum
    return out


def moment_window_length(
    spec: MomentSpec, t0_mean_s: float, sample_rate_hz: int
) -> int:
    return nearest_odd(spec.window_factor * t0_mean_s * sample_rate_hz)


def compute_oscillating_moment(
    signal: AudioSignal, spec: MomentSpec, t0_mean_s: float
) -> MomentSignal:
    """Oscillating moment of the speech signal, high-passed at 40 Hz.

    For every sample index t the value is the p1-th weighted moment of the
    Blackman-weighted p2-th power of the signal centered at t.
    """
    if not (T0_MEAN_MIN_S <= t0_mean_s <= T0_MEAN_MAX_S):
        raise ValueError(
            f"t0_mean_s must be in [{T0_MEAN_MIN_S:.4f}, {T0_MEAN_MAX_S:.2f}] s, "
            f"got {t0_mean_s}"
        )
    length = moment_window_length(spec, t0_mean_s, signal.sample_rate_hz)
    if length > len(signal) // 4:
        raise TooShortSignalError(
            f"moment window of {length} samples exceeds a quarter of the "
            f"{len(signal)}-sample signal"
        )
    window = make_blackman_window(length)
    powered = signal.samples**spec.p2
    raw = sliding_moment_values(powered, window, spec.p1)
    values = highpass_40hz_values(raw, signal.sample_rate_hz)
    return MomentSignal(values, spec, signal.sample_rate_hz)
