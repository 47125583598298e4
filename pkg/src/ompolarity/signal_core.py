"""Audio containers, Blackman windows and the shared 40 Hz high-pass filter."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.signal import butter, sosfiltfilt

from .errors import TooShortSignalError

MIN_SAMPLE_RATE_HZ = 6000
HIGHPASS_CUTOFF_HZ = 40.0
HIGHPASS_ORDER = 4


class Polarity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"

    def flipped(self) -> "Polarity":
        return Polarity.NEGATIVE if self is Polarity.POSITIVE else Polarity.POSITIVE


@dataclass(frozen=True)
class AudioSignal:
    """Mono sample sequence plus sample rate.

    Samples are dimensionless amplitudes, nominally in [-1, 1].
    """

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("samples must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must all be finite")
        if int(self.sample_rate_hz) < MIN_SAMPLE_RATE_HZ:
            raise ValueError(
                f"sample_rate_hz must be >= {MIN_SAMPLE_RATE_HZ}, "
                f"got {self.sample_rate_hz}"
            )
        object.__setattr__(self, "sample_rate_hz", int(self.sample_rate_hz))

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz

    def negated(self) -> "AudioSignal":
        return AudioSignal(-self.samples, self.sample_rate_hz)


@dataclass(frozen=True)
class WindowCoefficients:
    """Symmetric window weights with an exact center sample."""

    values: np.ndarray
    length: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        if self.length != values.size or self.length % 2 == 0:
            raise ValueError("length must be odd and match values")


def nearest_odd(x: float) -> int:
    """Round x to the nearest odd integer (ties round up)."""
    return 2 * int(np.floor((x - 1.0) / 2.0 + 0.5)) + 1


def make_blackman_window(length: int) -> WindowCoefficients:
    """Classic Blackman window of odd length, peak 1 at the center sample.

    Coefficients: 0.42 - 0.5*cos(2*pi*n/(N-1)) + 0.08*cos(4*pi*n/(N-1)).
    """
    if length < 3 or length % 2 == 0:
        raise ValueError(f"window length must be odd and >= 3, got {length}")
    return WindowCoefficients(np.blackman(length), length)


def highpass_settle_samples(sample_rate_hz: int) -> int:
    """Reflect-padding length used by the high-pass filter (two cutoff periods)."""
    return int(round(2.0 * sample_rate_hz / HIGHPASS_CUTOFF_HZ))


def highpass_40hz_values(values: np.ndarray, sample_rate_hz: int) -> np.ndarray:
    """Zero-phase 4th-order Butterworth high-pass at 40 Hz on a raw array.

    The input is reflect-padded by one settle length at both ends so the
    filter transient never touches the returned samples.
    """
    values = np.asarray(values, dtype=np.float64)
    settle = highpass_settle_samples(sample_rate_hz)
    if values.size < 3 * settle:
        raise TooShortSignalError(
            f"need at least {3 * settle} samples to high-pass at "
            f"{sample_rate_hz} Hz, got {values.size}"
        )
    sos = butter(
        HIGHPASS_ORDER, HIGHPASS_CUTOFF_HZ, "highpass", fs=sample_rate_hz, output="sos"
    )
    padded = np.pad(values, settle, mode="reflect")
    filtered = sosfiltfilt(sos, padded, padtype=None)
    return filtered[settle:-settle]


def highpass_40hz(signal: AudioSignal) -> AudioSignal:
    """Remove DC and sub-40 Hz drift without phase distortion."""
    return AudioSignal(
        highpass_40hz_values(signal.samples, signal.sample_rate_hz),
        signal.sample_rate_hz,
    )
