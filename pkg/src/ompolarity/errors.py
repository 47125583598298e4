"""Exception hierarchy shared by the detectors and the CLI."""


class PolarityError(Exception):
    """Base class for all detection-related failures."""


class TooShortSignalError(PolarityError):
    """Signal is too short for the requested analysis."""


class NoVoicingError(PolarityError):
    """No voiced frames were found; polarity cannot be decided."""


class UnreliableFrameError(PolarityError):
    """Local pitch estimate is not trustworthy; the frame is skipped."""


class DegenerateFrameError(PolarityError):
    """Analysis window is numerically silent; the frame is skipped."""


class InsufficientFramesError(PolarityError):
    """Every candidate frame was skipped; no votes were collected."""


class InsufficientHarmonicsError(PolarityError):
    """Fewer than two usable harmonics in the analysis frame."""


class WavFormatError(PolarityError):
    """Input file is not a WAV file this package can read."""
