import numpy as np
import pytest

from ompolarity import AudioSignal, Polarity, harmonic_phases, pc_detect, rps_detect
from ompolarity.baselines import (
    classify_phase_cut,
    phase_cut,
    relative_phase_shifts,
    rps_roughness,
    wrap_phase,
)
from ompolarity.errors import InsufficientHarmonicsError
from ompolarity.synth import SynthMode, SynthSpec, generate

from conftest import SR


def cosine_signal(f0, duration_s=1.0, phase=0.0):
    t = np.arange(int(duration_s * SR)) / SR
    return AudioSignal(np.cos(2.0 * np.pi * f0 * t + phase), SR)


class TestHarmonicPhases:
    def test_cosine_reads_zero_phase(self):
        # frame centered where the 100 Hz cosine peaks (t = 0.5 s = 50 periods)
        hp = harmonic_phases(cosine_signal(100.0), 0.5, 100.0, 3000.0)
        assert abs(hp.phases[0]) <= 0.05

    def test_sine_lags_cosine_by_quarter_turn(self):
        hp = harmonic_phases(
            cosine_signal(100.0, phase=-np.pi / 2.0), 0.5, 100.0, 3000.0
        )
        assert hp.phases[0] == pytest.approx(-np.pi / 2.0, abs=0.05)

    def test_zero_phase_train_has_all_zero_phases(self):
        out = generate(
            SynthSpec(f0_hz=100.0, duration_s=1.0, mode=SynthMode.ZERO_PHASE_HARMONICS)
        )
        # 0.5 s is an exact multiple of the 10 ms period, so every cosine peaks there
        hp = harmonic_phases(out.signal, 0.5, 100.0, 3000.0)
        present = hp.phases[np.isfinite(hp.phases)]
        assert present.size >= 4
        assert np.max(np.abs(wrap_phase(present))) <= 0.1

    def test_negation_advances_every_phase_by_pi(self):
        out = generate(SynthSpec(f0_hz=110.0, duration_s=1.0, seed=12))
        hp = harmonic_phases(out.signal, 0.5, 110.0, 3000.0)
        hp_neg = harmonic_phases(out.signal.negated(), 0.5, 110.0, 3000.0)
        both = np.isfinite(hp.phases) & np.isfinite(hp_neg.phases)
        delta = wrap_phase(hp_neg.phases[both] - hp.phases[both] - np.pi)
        assert np.max(np.abs(delta)) <= 0.05

    def test_frame_outside_signal_rejected(self):
        with pytest.raises(ValueError):
            harmonic_phases(cosine_signal(100.0), 0.001, 100.0, 3000.0)

    def test_rejects_out_of_band_f0(self):
        with pytest.raises(ValueError):
            harmonic_phases(cosine_signal(100.0), 0.5, 30.0, 3000.0)

    def test_band_limit_without_harmonics_rejected(self):
        with pytest.raises(InsufficientHarmonicsError):
            harmonic_phases(cosine_signal(400.0), 0.5, 400.0, 500.0)


class TestPhaseCut:
    def test_arithmetic(self):
        assert phase_cut(0.10, 0.15) == pytest.approx(0.05)
        assert abs(phase_cut(0.0, np.pi)) == pytest.approx(np.pi)

    def test_antiphase_harmonics_vote_positive(self):
        # a negative excitation peak flips every harmonic by pi, which leaves
        # phi_cut = wrap(2*pi - pi) = pi, the positive label
        assert classify_phase_cut(phase_cut(np.pi, np.pi)) is Polarity.POSITIVE

    def test_in_phase_harmonics_vote_negative(self):
        assert classify_phase_cut(0.05) is Polarity.NEGATIVE


class TestRelativePhaseShifts:
    def test_first_harmonic_always_zero(self):
        rng = np.random.default_rng(1)
        phases = rng.uniform(-np.pi, np.pi, size=10)
        theta = relative_phase_shifts(phases)
        assert theta[0] == pytest.approx(0.0, abs=1e-12)

    def test_zero_phases_are_perfectly_smooth(self):
        theta = relative_phase_shifts(np.zeros(12))
        assert rps_roughness(theta) == 0.0

    def test_polarity_flip_swaps_roughness(self):
        rng = np.random.default_rng(2)
        phases = 0.1 * rng.standard_normal(12)  # smooth-ish spectrum
        theta = relative_phase_shifts(phases)
        theta_flipped = relative_phase_shifts(wrap_phase(phases + np.pi))
        assert rps_roughness(theta_flipped) > rps_roughness(theta)

    def test_integer_period_time_shift_leaves_theta_unchanged(self):
        out = generate(SynthSpec(f0_hz=100.0, duration_s=1.0, seed=3))
        hp_a = harmonic_phases(out.signal, 0.5, 100.0, 3000.0)
        hp_b = harmonic_phases(out.signal, 0.5 + 3.0 / 100.0, 100.0, 3000.0)
        theta_a = relative_phase_shifts(hp_a.phases)
        theta_b = relative_phase_shifts(hp_b.phases)
        both = np.isfinite(theta_a) & np.isfinite(theta_b)
        assert np.max(np.abs(wrap_phase(theta_a[both] - theta_b[both]))) <= 0.1


class TestDetectors:
    def test_pc_positive_train(self, positive_train):
        result = pc_detect(positive_train.signal)
        assert result.label is Polarity.POSITIVE
        assert result.confidence > 0.5

    def test_pc_negated_train(self, positive_train):
        assert pc_detect(positive_train.signal.negated()).label is Polarity.NEGATIVE

    def test_rps_positive_train(self, positive_train):
        result = rps_detect(positive_train.signal)
        assert result.label is Polarity.POSITIVE

    def test_rps_negated_train(self, positive_train):
        assert rps_detect(positive_train.signal.negated()).label is Polarity.NEGATIVE

    def test_frame_votes_flip_under_negation(self, positive_train):
        sig = positive_train.signal
        for detect in (pc_detect, rps_detect):
            a = detect(sig)
            b = detect(sig.negated())
            assert a.n_frames == b.n_frames
            assert a.confidence == pytest.approx(b.confidence)
            assert a.label is not b.label
