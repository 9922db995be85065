"""
Analysis-modification-synthesis skeleton.

Windowed framing, forward/inverse DFT on real frames and overlap-add with
analysis-window envelope normalisation. The M-step and the P-step each run
one full pass with their own StftConfig.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple, Union

import numpy as np
from scipy.signal import get_window

from mspp_enhance.utils.constants import DEFAULT_SAMPLE_RATE_HZ
from mspp_enhance.utils.exceptions import ContractViolationError
from mspp_enhance.utils.models import SampleBuffer


logger = logging.getLogger(__name__)

# Overlap-add denominator floor for edge samples where the window sum vanishes.
ENVELOPE_FLOOR = 1e-8
# Relative floor, as a fraction of the envelope peak.
MIN_ENVELOPE_RATIO = 0.1

# One frame's complex DFT bins (length dft_size); 2-D arrays hold one frame per row.
ComplexSpectrumFrame = np.ndarray


class WindowKind(Enum):
    """Analysis window families."""
    HAMMING = "hamming"
    MODIFIED_HANNING = "modified_hanning"
    RECTANGULAR = "rectangular"


@dataclass(frozen=True)
class StftConfig:
    """Framing configuration for one AMS pass.

    Attributes:
        window_kind: Analysis window family
        frame_len: Frame length in samples (N for the M-step, N_tau for the P-step)
        hop: Frame advance in samples, 0 < hop <= frame_len
    """
    window_kind: WindowKind
    frame_len: int
    hop: int

    def __post_init__(self):
        kind = self.window_kind
        if not isinstance(kind, WindowKind):
            try:
                kind = WindowKind(kind)
            except ValueError as e:
                raise ContractViolationError(f"Unknown window kind: {self.window_kind!r}") from e
            object.__setattr__(self, 'window_kind', kind)
        if int(self.frame_len) < 2:
            raise ContractViolationError(f"frame_len must be >= 2, got {self.frame_len}")
        if not 0 < int(self.hop) <= int(self.frame_len):
            raise ContractViolationError(
                f"hop must satisfy 0 < hop <= frame_len, got hop={self.hop}, frame_len={self.frame_len}"
            )

    @property
    def dft_size(self) -> int:
        """DFT length; always equal to the frame length."""
        return self.frame_len

    @classmethod
    def m_step_default(cls) -> 'StftConfig':
        """Hamming, 100 samples, 50% overlap."""
        return cls(WindowKind.HAMMING, 100, 50)

    @classmethod
    def p_step_default(cls) -> 'StftConfig':
        """Modified Hanning, 256 samples, 64-sample overlap."""
        return cls(WindowKind.MODIFIED_HANNING, 256, 192)

    def to_dict(self) -> dict:
        """Plain-dict form for manifests."""
        return {'window': self.window_kind.value, 'frame_len': self.frame_len, 'hop': self.hop}


@dataclass
class FrameSequence:
    """Windowed frames of one signal.

    Attributes:
        frames: Array of shape (L, frame_len); frame l starts at sample l*hop
        config: Framing configuration used
        original_len: Length of the framed signal before tail padding
        sample_rate_hz: Sample rate of the framed signal
    """
    frames: np.ndarray
    config: StftConfig
    original_len: int
    sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ

    @property
    def frame_count(self) -> int:
        """Number of frames L."""
        return int(self.frames.shape[0])


def make_window(kind: Union[WindowKind, str], length: int) -> np.ndarray:
    """Build a periodic analysis window.

    Args:
        kind: Window family
        length: Number of weights, at least 2

    Returns:
        Real weight vector of the requested length

    Raises:
        ContractViolationError: If length < 2 or the kind is unknown
    """
    if length < 2:
        raise ContractViolationError(f"Window length must be >= 2, got {length}")
    try:
        kind = WindowKind(kind)
    except ValueError as e:
        raise ContractViolationError(f"Unknown window kind: {kind!r}") from e

    if kind is WindowKind.HAMMING:
        return get_window('hamming', length, fftbins=True)
    if kind is WindowKind.MODIFIED_HANNING:
        return get_window('hann', length, fftbins=True)
    return np.ones(length)


def frame_count_for(signal_len: int, hop: int) -> int:
    """Number of frames needed so every sample starts inside some frame."""
    return max(1, -(-signal_len // hop))


def frame_signal(buffer: SampleBuffer, config: StftConfig) -> FrameSequence:
    """Split a buffer into windowed, tail-padded frames.

    Raises:
        ContractViolationError: If the buffer is empty
    """
    n = len(buffer)
    if n < 1:
        raise ContractViolationError("Cannot frame an empty buffer")

    count = frame_count_for(n, config.hop)
    padded_len = (count - 1) * config.hop + config.frame_len
    padded = np.zeros(padded_len)
    padded[:n] = buffer.samples

    views = np.lib.stride_tricks.sliding_window_view(padded, config.frame_len)[::config.hop][:count]
    frames = views * make_window(config.window_kind, config.frame_len)
    return FrameSequence(
        frames=frames,
        config=config,
        original_len=n,
        sample_rate_hz=buffer.sample_rate_hz,
    )


def forward_dft(frame: np.ndarray) -> ComplexSpectrumFrame:
    """DFT of one real frame (or of each row of a 2-D array).

    The upper half of the spectrum is mirrored from the real-input transform,
    so bins[k] == conj(bins[N - k]) holds bit-for-bit.
    """
    frame = np.asarray(frame, dtype=np.float64)
    n = frame.shape[-1]
    half = np.fft.rfft(frame, axis=-1)
    mirrored = np.conj(half[..., 1:n - half.shape[-1] + 1][..., ::-1])
    return np.concatenate([half, mirrored], axis=-1)


def inverse_dft_real(spectrum: ComplexSpectrumFrame) -> Tuple[np.ndarray, float]:
    """Real part of the inverse DFT.

    Returns:
        Tuple of (real frame(s), maximum absolute imaginary part discarded)
    """
    full = np.fft.ifft(np.asarray(spectrum, dtype=np.complex128), axis=-1)
    max_imag = float(np.max(np.abs(full.imag))) if full.size else 0.0
    return full.real, max_imag


def hermitian_part(spectrum: ComplexSpectrumFrame) -> ComplexSpectrumFrame:
    """Conjugate-symmetric projection (X[k] + conj(X[-k])) / 2.

    Its inverse DFT equals Re(IDFT(X)) exactly, so it carries everything the
    real-part synthesis keeps.
    """
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    reflected = np.roll(spectrum[..., ::-1], 1, axis=-1)
    return 0.5 * (spectrum + np.conj(reflected))


def overlap_add(frames: Union[np.ndarray, Sequence[np.ndarray]], config: StftConfig, original_len: int,
                sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ) -> SampleBuffer:
    """Overlap-add frames, normalised by the summed analysis window.

    out[m] = sum_l frame_l[m - l*hop] / max(sum_l window[m - l*hop], floor),
    truncated (or zero-extended) to original_len. The floor is 1e-8 or a tenth
    of the envelope peak, whichever is larger: leading samples with almost no
    window support fade in instead of amplifying modified frames. Interior
    samples of both step framings stay above it.

    Raises:
        ContractViolationError: If no frames are given or a frame has the wrong length
    """
    frames = np.asarray(frames, dtype=np.float64)
    if frames.ndim != 2 or frames.shape[0] == 0:
        raise ContractViolationError("overlap_add needs a non-empty list of frames")
    if frames.shape[1] != config.frame_len:
        raise ContractViolationError(
            f"Frame length {frames.shape[1]} does not match config frame_len {config.frame_len}"
        )

    window = make_window(config.window_kind, config.frame_len)
    total_len = (frames.shape[0] - 1) * config.hop + config.frame_len
    out = np.zeros(total_len)
    envelope = np.zeros(total_len)
    for index, frame in enumerate(frames):
        start = index * config.hop
        out[start:start + config.frame_len] += frame
        envelope[start:start + config.frame_len] += window

    floor = max(ENVELOPE_FLOOR, MIN_ENVELOPE_RATIO * float(envelope.max()))
    out /= np.maximum(envelope, floor)
    result = np.zeros(original_len)
    keep = min(original_len, total_len)
    result[:keep] = out[:keep]
    return SampleBuffer(samples=result, sample_rate_hz=sample_rate_hz)


def analyze(buffer: SampleBuffer, config: StftConfig) -> Tuple[FrameSequence, np.ndarray]:
    """Frame a buffer and transform every frame.

    Returns:
        Tuple of (FrameSequence, spectra of shape (L, dft_size))
    """
    sequence = frame_signal(buffer, config)
    spectra = forward_dft(sequence.frames)
    logger.debug("Analyzed %s samples into %s frames (%s/%s/%s)",
                 len(buffer), sequence.frame_count, config.window_kind.value, config.frame_len, config.hop)
    return sequence, spectra


def imaginary_residue_ratio(spectra: np.ndarray) -> float:
    """Largest per-frame ratio of discarded imaginary to total IDFT magnitude."""
    full = np.fft.ifft(np.asarray(spectra, dtype=np.complex128), axis=-1)
    full = np.atleast_2d(full)
    worst = 0.0
    for row in full:
        scale = float(np.max(np.abs(row)))
        if scale > 0.0:
            worst = max(worst, float(np.max(np.abs(row.imag))) / scale)
    return worst


def synthesize(spectra: np.ndarray, sequence: FrameSequence) -> SampleBuffer:
    """Inverse-transform modified spectra and overlap-add them back to a buffer."""
    frames, _ = inverse_dft_real(spectra)
    return overlap_add(frames, sequence.config, sequence.original_len, sequence.sample_rate_hz)
