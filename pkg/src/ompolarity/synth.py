"""Synthetic voiced-signal generator with known ground-truth polarity.

The glottal-pulse mode builds a differentiated Rosenberg-style excitation
whose single dominant peak per period is negative for positive polarity,
then colors it with formant resonators. The zero-phase mode sums cosines
for baseline phase tests.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.signal import lfilter

from .signal_core import AudioSignal, Polarity
from .wave_io import write_wav

# Rosenberg pulse timing as fractions of the period. Chosen so that the
# inter-moment phase shift of a positive-polarity train stays well inside
# the positive decision interval across F0 in [50, 400] Hz; the closing
# fraction must stay below the opening one to keep the closing peak dominant.
OPEN_FRACTION = 0.52
CLOSE_FRACTION = 0.42

DEFAULT_FORMANTS = ((600.0, 80.0), (1200.0, 120.0))
ZERO_PHASE_MAX_FREQ_HZ = 3500.0
PEAK_LEVEL = 0.5

# Corpus sampling ranges: F1 stays at or above 700 Hz so its resonance
# never collides with the second harmonic anywhere in the F0 span.
CORPUS_F0_RANGE_HZ = (80.0, 300.0)
CORPUS_F1_RANGE_HZ = (700.0, 900.0)
CORPUS_F2_FACTOR_RANGE = (1.8, 2.6)
CORPUS_BW1_RANGE_HZ = (80.0, 150.0)
CORPUS_BW2_RANGE_HZ = (100.0, 200.0)


class SynthMode(enum.Enum):
    GLOTTAL_PULSE = "glottal-pulse"
    ZERO_PHASE_HARMONICS = "zero-phase-harmonics"


@dataclass(frozen=True)
class SynthSpec:
    f0_hz: float
    duration_s: float
    sample_rate_hz: int = 16000
    polarity: Polarity = Polarity.POSITIVE
    formants: tuple = DEFAULT_FORMANTS
    mode: SynthMode = SynthMode.GLOTTAL_PULSE
    jitter_pct: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (50.0 <= self.f0_hz <= 400.0):
            raise ValueError(f"f0_hz must be in [50, 400], got {self.f0_hz}")
        if self.f0_hz >= self.sample_rate_hz / 20.0:
            raise ValueError("f0_hz must be below sample_rate_hz / 20")
        if self.duration_s < 0.5:
            raise ValueError("duration_s must be >= 0.5")
        if self.jitter_pct < 0.0:
            raise ValueError("jitter_pct must be >= 0")


@dataclass(frozen=True)
class SynthOutput:
    signal: AudioSignal
    excitation: AudioSignal
    truth: SynthSpec


def rosenberg_derivative_period(
    n_samples: int,
    open_fraction: float = OPEN_FRACTION,
    close_fraction: float = CLOSE_FRACTION,
) -> np.ndarray:
    """One period of the differentiated Rosenberg pulse.

    The opening phase rises sinusoidally; the closing phase ends in the
    dominant negative peak at the closure instant.
    """
    t = np.arange(n_samples) / n_samples
    out = np.zeros(n_samples)
    opening = t < open_fraction
    out[opening] = (np.pi / (2.0 * open_fraction)) * np.sin(
        np.pi * t[opening] / open_fraction
    )
    closing = (t >= open_fraction) & (t < open_fraction + close_fraction)
    out[closing] = -(np.pi / (2.0 * close_fraction)) * np.sin(
        np.pi * (t[closing] - open_fraction) / (2.0 * close_fraction)
    )
    return out


def _formant_filter(excitation: np.ndarray, sample_rate_hz: int, formants) -> np.ndarray:
    out = excitation
    for center_hz, bandwidth_hz in formants:
        r = np.exp(-np.pi * bandwidth_hz / sample_rate_hz)
        theta = 2.0 * np.pi * center_hz / sample_rate_hz
        b = [(1.0 - r * r) * np.sin(theta)]
        a = [1.0, -2.0 * r * np.cos(theta), r * r]
        out = lfilter(b, a, out)
    return out


def generate(spec: SynthSpec) -> SynthOutput:
    """Render the synthetic signal; deterministic for a fixed spec."""
    sr = spec.sample_rate_hz
    n = int(round(spec.duration_s * sr))
    rng = np.random.default_rng(spec.seed)

    if spec.mode is SynthMode.ZERO_PHASE_HARMONICS:
        t = np.arange(n) / sr
        limit = min(ZERO_PHASE_MAX_FREQ_HZ, 0.45 * sr)
        sig = np.zeros(n)
        k = 1
        while k * spec.f0_hz <= limit:
            sig += np.cos(2.0 * np.pi * k * spec.f0_hz * t)
            k += 1
        excitation = sig.copy()
    else:
        excitation = np.zeros(n)
        pos = 0
        while True:
            period_s = (1.0 / spec.f0_hz) * (
                1.0 + spec.jitter_pct / 100.0 * rng.uniform(-1.0, 1.0)
            )
            n_period = int(round(period_s * sr))
            if pos + n_period > n:
                break
            excitation[pos : pos + n_period] = rosenberg_derivative_period(n_period)
            pos += n_period
        sig = _formant_filter(excitation, sr, spec.formants)

    sig = PEAK_LEVEL * sig / np.max(np.abs(sig))
    excitation = PEAK_LEVEL * excitation / np.max(np.abs(excitation))
    if spec.polarity is Polarity.NEGATIVE:
        sig = -sig
        excitation = -excitation
    return SynthOutput(AudioSignal(sig, sr), AudioSignal(excitation, sr), spec)


def make_eval_corpus(
    n_files: int,
    seed: int,
    out_dir,
    duration_s: float = 1.0,
    sample_rate_hz: int = 16000,
    jitter_pct: float = 1.0,
) -> Path:
    """Write n_files WAVs of alternating polarity plus a labels manifest.

    Files span F0 in [80, 300] Hz with randomized formant sets; the
    manifest has one "path,polarity" line per file. Deterministic for a
    fixed seed; returns the manifest path.
    """
    if n_files < 2:
        raise ValueError("n_files must be >= 2")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    lines = []
    for i in range(n_files):
        f0 = rng.uniform(*CORPUS_F0_RANGE_HZ)
        f1 = rng.uniform(*CORPUS_F1_RANGE_HZ)
        f2 = f1 * rng.uniform(*CORPUS_F2_FACTOR_RANGE)
        bw1 = rng.uniform(*CORPUS_BW1_RANGE_HZ)
        bw2 = rng.uniform(*CORPUS_BW2_RANGE_HZ)
        polarity = Polarity.POSITIVE if i % 2 == 0 else Polarity.NEGATIVE
        spec = SynthSpec(
            f0_hz=f0,
            duration_s=duration_s,
            sample_rate_hz=sample_rate_hz,
            polarity=polarity,
            formants=((f1, bw1), (f2, bw2)),
            jitter_pct=jitter_pct,
            seed=int(rng.integers(0, 2**31)),
        )
        name = f"synth_{i:04d}_{polarity.value}.wav"
        write_wav(out_dir / name, generate(spec).signal)
        lines.append(f"{name},{polarity.value}")
    manifest = out_dir / "labels.csv"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest
