"""Harmonic-phase polarity baselines: phase-cut and relative-phase-shift."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InsufficientFramesError,
    InsufficientHarmonicsError,
    UnreliableFrameError,
)
from .ompd import PolarityResult, _majority
from .pitch import F0_MAX_HZ, F0_MIN_HZ, HOP_S, analyze_pitch, local_period_values
from .signal_core import AudioSignal, Polarity, nearest_odd

RPS_MAX_FREQ_HZ = 3000.0
RPS_MIN_HARMONICS = 4
ABSENT_MAG_FACTOR = 1e-10


@dataclass(frozen=True)
class HarmonicPhases:
    """Instantaneous phases of harmonics k = 1..K at one analysis time.

    Absent harmonics are stored as NaN; phases are wrapped to (-pi, pi].
    """

    frame_time_s: float
    f0_hz: float
    phases: np.ndarray

    def present(self, k: int) -> bool:
        return bool(np.isfinite(self.phases[k - 1]))


def wrap_phase(x):
    """Wrap radians into (-pi, pi]."""
    return -((-np.asarray(x) + np.pi) % (2.0 * np.pi) - np.pi)


def harmonic_phases(
    signal: AudioSignal, frame_time_s: float, f0_hz: float, max_freq_hz: float
) -> HarmonicPhases:
    """Measure harmonic phases at the frame center.

    A Hann window of three pitch periods is centered at frame_time_s and the
    DFT is referenced to the window center, so a cosine peaking at the
    center reads phase zero. Each harmonic's frequency is refined by a
    parabolic fit on the magnitude peak near k*f0.
    """
    if not (50.0 <= f0_hz <= 500.0):
        raise ValueError(f"f0 must be in [50, 500] Hz, got {f0_hz}")
    sr = signal.sample_rate_hz
    center = int(round(frame_time_s * sr))
    length = nearest_odd(3.0 * sr / f0_hz)
    half = length // 2
    if center - half < 0 or center + half >= len(signal):
        raise ValueError("analysis frame extends outside the signal")
    seg = signal.samples[center - half : center + half + 1] * np.hanning(length)
    frame_rms = np.sqrt(np.mean(seg * seg))

    nfft = 1 << int(np.ceil(np.log2(4 * length)))
    # rotate so the window center sits at the time origin (zero-phase ref)
    buf = np.zeros(nfft)
    buf[: half + 1] = seg[half:]
    buf[-half:] = seg[:half]
    spectrum = np.fft.rfft(buf)
    mags = np.abs(spectrum)

    limit = min(max_freq_hz, 0.5 * sr)
    n_harm = int(np.floor(limit / f0_hz))
    if n_harm < 2:
        raise InsufficientHarmonicsError("fewer than 2 harmonics under the band limit")
    bin_per_hz = nfft / sr
    phases = np.full(n_harm, np.nan)
    search = max(2, int(round(0.4 * f0_hz * bin_per_hz)))
    for k in range(1, n_harm + 1):
        i = int(round(k * f0_hz * bin_per_hz))
        lo = max(1, i - search)
        hi = min(mags.size - 2, i + search)
        if hi <= lo:
            continue
        j = lo + int(np.argmax(mags[lo : hi + 1]))
        if mags[j] < ABSENT_MAG_FACTOR * frame_rms:
            continue
        # parabolic refinement of the peak bin; the phase is read at the
        # bin nearest the refined frequency
        a, b, c = mags[j - 1], mags[j], mags[j + 1]
        denom = a - 2.0 * b + c
        delta = 0.0 if denom == 0.0 else 0.5 * (a - c) / denom
        j_ref = int(round(j + float(np.clip(delta, -0.5, 0.5))))
        phases[k - 1] = np.angle(spectrum[j_ref])
    if np.count_nonzero(np.isfinite(phases)) < 2:
        raise InsufficientHarmonicsError("fewer than 2 harmonics present")
    return HarmonicPhases(frame_time_s, f0_hz, phases)


def phase_cut(phi1: float, phi2: float) -> float:
    """Intersected phase of the first two harmonics: wrap(2*phi1 - phi2)."""
    return float(wrap_phase(2.0 * phi1 - phi2))


def classify_phase_cut(phi_cut: float) -> Polarity:
    """Positive polarity iff phi_cut is closer to pi than to 0.

    A negative excitation peak, which defines positive polarity, puts the
    first two harmonics in antiphase at the peak, so |phi_cut| >= pi/2.
    """
    return Polarity.POSITIVE if abs(phi_cut) >= np.pi / 2.0 else Polarity.NEGATIVE


def relative_phase_shifts(phases: np.ndarray) -> np.ndarray:
    """theta(k) = wrap(phi_k - k*phi_1) for k = 1..K (NaN where absent)."""
    k = np.arange(1, phases.size + 1)
    return np.where(
        np.isfinite(phases), wrap_phase(phases - k * phases[0]), np.nan
    )


def rps_roughness(theta: np.ndarray) -> float:
    """Mean absolute wrapped increment of theta over adjacent present harmonics."""
    steps = []
    for k in range(theta.size - 1):
        if np.isfinite(theta[k]) and np.isfinite(theta[k + 1]):
            steps.append(abs(float(wrap_phase(theta[k + 1] - theta[k]))))
    if not steps:
        return float("nan")
    return float(np.mean(steps))


def _baseline_frames(signal: AudioSignal, hop_s: float, f0_min: float, f0_max: float):
    """Yield (sample_index, local_f0) for voiced frame centers."""
    sr = signal.sample_rate_hz
    info = analyze_pitch(signal, f0_min, f0_max)
    t0m = info.t0_mean_s
    hop = int(round(hop_s * sr))
    edge = int(np.ceil(2.0 * t0m * sr))
    for region in info.voiced_regions:
        first = max(region.start_sample + edge, edge)
        last = min(region.end_sample - edge, len(signal) - edge)
        for t in range(((first + hop - 1) // hop) * hop, last, hop):
            try:
                t0_local = local_period_values(signal.samples, sr, t, t0m)
            except UnreliableFrameError:
                continue
            f0 = 1.0 / t0_local
            if not (50.0 <= f0 <= 500.0):
                continue
            yield t, f0


def pc_detect(
    signal: AudioSignal,
    hop_s: float = HOP_S,
    f0_min: float = F0_MIN_HZ,
    f0_max: float = F0_MAX_HZ,
) -> PolarityResult:
    """Phase-cut polarity detector: majority over voiced-frame phi_cut votes."""
    sr = signal.sample_rate_hz
    votes = []
    for t, f0 in _baseline_frames(signal, hop_s, f0_min, f0_max):
        try:
            hp = harmonic_phases(signal, t / sr, f0, 3.0 * f0)
        except (InsufficientHarmonicsError, ValueError):
            continue
        if not (hp.present(1) and hp.present(2)):
            continue
        votes.append(classify_phase_cut(phase_cut(hp.phases[0], hp.phases[1])))
    return _majority(votes)


def rps_detect(
    signal: AudioSignal,
    hop_s: float = HOP_S,
    f0_min: float = F0_MIN_HZ,
    f0_max: float = F0_MAX_HZ,
) -> PolarityResult:
    """Relative-phase-shift detector, voting against the frame's own inverse.

    Each frame compares the roughness of its measured RPS sequence with the
    roughness after a polarity flip (every phase advanced by pi). A negative
    excitation peak makes the measured sequence the rough one, so rough
    measured phases vote for positive polarity.
    """
    sr = signal.sample_rate_hz
    votes = []
    for t, f0 in _baseline_frames(signal, hop_s, f0_min, f0_max):
        try:
            hp = harmonic_phases(signal, t / sr, f0, RPS_MAX_FREQ_HZ)
        except (InsufficientHarmonicsError, ValueError):
            continue
        if np.count_nonzero(np.isfinite(hp.phases)) < RPS_MIN_HARMONICS:
            continue
        theta = relative_phase_shifts(hp.phases)
        theta_flipped = relative_phase_shifts(wrap_phase(hp.phases + np.pi))
        r = rps_roughness(theta)
        r_flipped = rps_roughness(theta_flipped)
        if not (np.isfinite(r) and np.isfinite(r_flipped)):
            continue
        votes.append(Polarity.POSITIVE if r > r_flipped else Polarity.NEGATIVE)
    return _majority(votes)
