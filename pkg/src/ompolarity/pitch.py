"""Rough pitch and voicing front-end: mean period, voiced regions, local T0."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve, medfilt

from .errors import NoVoicingError, TooShortSignalError, UnreliableFrameError
from .moments import MomentSignal
from .signal_core import AudioSignal

F0_MIN_HZ = 50.0
F0_MAX_HZ = 500.0
FRAME_S = 0.030
HOP_S = 0.010
MIN_SIGNAL_S = 0.5

# Voicing gates: frame energy relative to the whole file, plus a floor on
# the normalized autocorrelation peak in the pitch lag band.
RMS_GATE = 0.05
VOICING_NACF_GATE = 0.45
LOCAL_T0_NACF_GATE = 0.5


@dataclass(frozen=True)
class VoicedRegion:
    start_sample: int
    end_sample: int  # exclusive

    def __post_init__(self):
        if not self.start_sample < self.end_sample:
            raise ValueError("voiced region must have start < end")

    def __len__(self) -> int:
        return self.end_sample - self.start_sample


@dataclass(frozen=True)
class PitchInfo:
    t0_mean_s: float
    voiced_regions: tuple = field(default_factory=tuple)
    frame_hop_s: float = HOP_S


def _nacf_candidates(segment: np.ndarray, base_len: int, lag_min: int, lag_max: int):
    """Normalized cross-correlation of segment[:base_len] against its own
    lagged copies, for every lag in [lag_min, lag_max]."""
    base = segment[:base_len]
    e0 = np.dot(base, base)
    num = fftconvolve(segment, base[::-1], mode="valid")  # num[l] for l = 0..
    sq = np.concatenate(([0.0], np.cumsum(segment * segment)))
    lags = np.arange(lag_min, lag_max + 1)
    energy = sq[lags + base_len] - sq[lags]
    denom = np.sqrt(e0 * energy)
    with np.errstate(invalid="ignore", divide="ignore"):
        nacf = np.where(denom > 0.0, num[lag_min : lag_max + 1] / denom, 0.0)
    return lags, nacf


def _shortest_strong_lag(nacf: np.ndarray, relative: float = 0.9) -> int:
    """Index of the smallest lag within `relative` of the global peak.

    Periodic signals correlate equally well at every multiple of the true
    period; preferring the shortest strong lag avoids octave errors.
    """
    peak = float(np.max(nacf))
    interior = np.zeros_like(nacf, dtype=bool)
    interior[1:-1] = (nacf[1:-1] >= nacf[:-2]) & (nacf[1:-1] >= nacf[2:])
    candidates = np.flatnonzero(interior & (nacf >= relative * peak))
    if candidates.size == 0:
        return int(np.argmax(nacf))
    return int(candidates[0])


def _parabolic_refine(values: np.ndarray, i: int) -> float:
    """Sub-sample peak position from the three points around index i."""
    if i <= 0 or i >= values.size - 1:
        return float(i)
    a, b, c = values[i - 1], values[i], values[i + 1]
    denom = a - 2.0 * b + c
    if denom == 0.0:
        return float(i)
    return i + 0.5 * (a - c) / denom


def analyze_pitch(
    signal: AudioSignal, f0_min: float = F0_MIN_HZ, f0_max: float = F0_MAX_HZ
) -> PitchInfo:
    """Mean pitch period plus voicing boundaries from framewise autocorrelation.

    A 30 ms frame with a 10 ms hop is voiced when its RMS reaches 5% of the
    whole-file RMS and the normalized autocorrelation peaks at >= 0.45 in
    the pitch lag band. The voiced flags are median-smoothed over 3 frames
    and t0_mean is the median voiced period.
    """
    s = signal.samples
    sr = signal.sample_rate_hz
    if signal.duration_s < MIN_SIGNAL_S:
        raise TooShortSignalError(
            f"need at least {MIN_SIGNAL_S} s of audio, got {signal.duration_s:.3f} s"
        )
    frame_len = int(round(FRAME_S * sr))
    hop = int(round(HOP_S * sr))
    lag_min = max(1, int(np.floor(sr / f0_max)))
    lag_max = int(np.ceil(sr / f0_min))
    file_rms = np.sqrt(np.mean(s * s))

    n_frames = max(0, (s.size - frame_len - lag_max) // hop + 1)
    voiced = np.zeros(n_frames, dtype=bool)
    periods = np.full(n_frames, np.nan)
    for i in range(n_frames):
        start = i * hop
        frame = s[start : start + frame_len]
        rms = np.sqrt(np.mean(frame * frame))
        if file_rms == 0.0 or rms < RMS_GATE * file_rms:
            continue
        segment = s[start : start + frame_len + lag_max]
        lags, nacf = _nacf_candidates(segment, frame_len, lag_min, lag_max)
        if float(np.max(nacf)) < VOICING_NACF_GATE:
            continue
        voiced[i] = True
        best = _shortest_strong_lag(nacf)
        periods[i] = _parabolic_refine(nacf, best) + lag_min

    if n_frames >= 3:
        voiced = medfilt(voiced.astype(np.int8), 3).astype(bool)
    if not voiced.any():
        raise NoVoicingError("no voiced frames found")

    t0_mean = float(np.nanmedian(periods[voiced])) / sr
    t0_mean = float(np.clip(t0_mean, 1.0 / f0_max, 1.0 / f0_min))

    regions = []
    run_start = None
    for i in range(n_frames + 1):
        if i < n_frames and voiced[i]:
            if run_start is None:
                run_start = i
        elif run_start is not None:
            start = run_start * hop
            end = min((i - 1) * hop + frame_len, s.size)
            regions.append(VoicedRegion(start, end))
            run_start = None
    return PitchInfo(t0_mean, tuple(regions), HOP_S)


def local_period_values(
    values: np.ndarray, sample_rate_hz: int, t: int, t0_mean_s: float
) -> float:
    """Local period (seconds) near sample t from normalized autocorrelation.

    Searches lags in [0.5, 2] * t0_mean over a window of 4 * t0_mean
    centered at t, with parabolic refinement of the winning lag.
    """
    sr = sample_rate_hz
    half = int(round(2.0 * t0_mean_s * sr))
    if t < half or t + half > values.size:
        raise ValueError(f"t={t} is closer than 2*t0_mean to a signal edge")
    lag_min = max(1, int(round(0.5 * t0_mean_s * sr)))
    lag_max = int(round(2.0 * t0_mean_s * sr))
    win = values[t - half : t + half]
    lags = np.arange(lag_min, min(lag_max, win.size - 2) + 1)
    # autocorrelation and shrinking-overlap energies, all lags at once
    acf = fftconvolve(win, win[::-1], mode="full")[win.size - 1 + lags]
    sq = np.concatenate(([0.0], np.cumsum(win * win)))
    head = sq[win.size - lags]  # energy of win[: size-lag]
    tail = sq[win.size] - sq[lags]  # energy of win[lag :]
    denom = np.sqrt(head * tail)
    with np.errstate(invalid="ignore", divide="ignore"):
        nacf = np.where(denom > 0.0, acf / denom, 0.0)
    peak = float(np.max(nacf))
    if peak < LOCAL_T0_NACF_GATE:
        raise UnreliableFrameError(
            f"normalized autocorrelation peak {peak:.3f} below "
            f"{LOCAL_T0_NACF_GATE}"
        )
    best = _shortest_strong_lag(nacf)
    lag = _parabolic_refine(nacf, best) + lag_min
    return float(np.clip(lag / sr, 0.5 * t0_mean_s, 2.0 * t0_mean_s))


def local_t0(moment: MomentSignal, t: int, t0_mean_s: float) -> float:
    """Local pitch period at sample t, read off an oscillating-moment signal."""
    return local_period_values(moment.values, moment.sample_rate_hz, t, t0_mean_s)
