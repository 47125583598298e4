"""Speech polarity detection from oscillating statistical moments."""

from .baselines import (
    HarmonicPhases,
    harmonic_phases,
    pc_detect,
    phase_cut,
    rps_detect,
)
from .errors import (
    DegenerateFrameError,
    InsufficientFramesError,
    InsufficientHarmonicsError,
    NoVoicingError,
    PolarityError,
    TooShortSignalError,
    UnreliableFrameError,
    WavFormatError,
)
from .harness import (
    CorpusReport,
    detect_file,
    dump_diagnostics,
    eval_corpus,
    format_report_text,
    report_json_lines,
)
from .moments import (
    MomentSignal,
    MomentSpec,
    compute_oscillating_moment,
    sliding_moment_direct,
    sliding_moment_values,
)
from .ompd import (
    FrameDecision,
    OMPDConfig,
    PolarityResult,
    classify_frame,
    detect_polarity_ompd,
    phase_shift_at,
)
from .pitch import PitchInfo, VoicedRegion, analyze_pitch, local_t0
from .signal_core import (
    AudioSignal,
    Polarity,
    WindowCoefficients,
    highpass_40hz,
    make_blackman_window,
)
from .synth import SynthMode, SynthOutput, SynthSpec, generate, make_eval_corpus
from .wave_io import read_wav, write_wav

__version__ = "0.1.0"
