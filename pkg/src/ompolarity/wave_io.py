"""WAV ingestion and output. Reading never rescales asymmetrically or
offsets the data, so the sample signs survive ingestion exactly."""
from __future__ import annotations

import warnings
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .errors import WavFormatError
from .signal_core import AudioSignal

_INT_SCALE = {
    np.dtype(np.int16): 1.0 / 32768.0,
    np.dtype(np.int32): 1.0 / 2147483648.0,
    np.dtype(np.uint8): None,  # offset-binary; rejected below
}


def read_wav(path) -> AudioSignal:
    """Read a PCM 16/24/32-bit or 32-bit-float WAV as a mono AudioSignal.

    Integer data is scaled to [-1, 1); multi-channel input keeps channel 0
    with a warning. 24-bit PCM arrives as int32 from the RIFF parser.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    try:
        sr, data = wavfile.read(str(path))
    except FileNotFoundError:
        raise
    except Exception as exc:
        raise WavFormatError(f"{path}: {exc}") from exc
    if data.ndim == 2:
        warnings.warn(f"{path}: {data.shape[1]} channels, keeping channel 0")
        data = data[:, 0]
    if data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    elif data.dtype in (np.int16, np.int32):
        samples = data.astype(np.float64) * _INT_SCALE[data.dtype]
    else:
        raise WavFormatError(
            f"{path}: unsupported sample format {data.dtype}; expected "
            "16/24/32-bit PCM or 32-bit float"
        )
    try:
        return AudioSignal(samples, int(sr))
    except ValueError as exc:
        raise WavFormatError(f"{path}: {exc}") from exc


def write_wav(path, signal: AudioSignal) -> None:
    """Write 16-bit PCM mono; values are clipped to the representable range."""
    scaled = np.round(signal.samples * 32768.0)
    data = np.clip(scaled, -32768, 32767).astype(np.int16)
    wavfile.write(str(path), signal.sample_rate_hz, data)
