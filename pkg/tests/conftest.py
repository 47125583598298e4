import numpy as np
import pytest

from ompolarity import Polarity, SynthSpec, generate

SR = 16000


@pytest.fixture(scope="session")
def positive_train():
    """2 s positive-polarity glottal train at 120 Hz with mild jitter."""
    spec = SynthSpec(
        f0_hz=120.0, duration_s=2.0, polarity=Polarity.POSITIVE,
        jitter_pct=1.0, seed=3,
    )
    return generate(spec)


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    from ompolarity import make_eval_corpus

    out = tmp_path_factory.mktemp("corpus")
    manifest = make_eval_corpus(20, seed=7, out_dir=out)
    return out, manifest


def sinusoid(freq_hz, duration_s=1.0, sr=SR, amplitude=1.0, phase=0.0):
    t = np.arange(int(duration_s * sr)) / sr
    return amplitude * np.sin(2.0 * np.pi * freq_hz * t + phase)
