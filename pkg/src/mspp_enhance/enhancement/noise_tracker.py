"""
Voice activity detection and recursive noise-spectrum estimation.

The noise power estimate is bootstrapped from the first frames (assumed
noise-only) and then updated by first-order recursive averaging on frames
the energy-ratio VAD classifies as non-speech.
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from mspp_enhance.enhancement import constants
from mspp_enhance.utils.exceptions import InsufficientSignalError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NoiseProfile:
    """Per-bin noise power estimate |D[k]|^2.

    Attributes:
        mag_sq: Non-negative noise power per bin (length dft_size)
        beta: Recursive-averaging constant in (0, 1)
        init_frame_count: Number of frames the estimate was bootstrapped from
    """
    mag_sq: np.ndarray
    beta: float = constants.NOISE_BETA
    init_frame_count: int = constants.INIT_FRAME_COUNT

    @property
    def magnitude(self) -> np.ndarray:
        """Per-bin noise magnitude |D[k]|."""
        return np.sqrt(self.mag_sq)


@dataclass(frozen=True)
class VadDecision:
    """Outcome of the voice activity detector for one frame."""
    is_speech: bool
    frame_snr_db: float


def init_noise(first_frames: Sequence[np.ndarray], count: int = constants.INIT_FRAME_COUNT,
               beta: float = constants.NOISE_BETA) -> NoiseProfile:
    """Average |Y[k]|^2 over the first `count` frames.

    Raises:
        InsufficientSignalError: If fewer than `count` frames are available
    """
    if len(first_frames) < count:
        raise InsufficientSignalError(
            f"Noise bootstrap needs {count} frames, only {len(first_frames)} available"
        )
    power = np.abs(np.asarray(first_frames[:count])) ** 2
    return NoiseProfile(mag_sq=power.mean(axis=0), beta=beta, init_frame_count=count)


def vad_classify(frame: np.ndarray, profile: NoiseProfile,
                 threshold_db: float = constants.VAD_THRESHOLD_DB) -> VadDecision:
    """Classify a frame by its energy relative to the noise estimate.

    frame_snr_db = 10*log10(max(sum|Y|^2, eps) / max(sum mag_sq, eps)) and the
    frame is speech when it exceeds threshold_db.
    """
    frame_energy = float(np.sum(np.abs(frame) ** 2))
    noise_energy = float(np.sum(profile.mag_sq))
    frame_snr_db = 10.0 * math.log10(max(frame_energy, constants.EPSILON) / max(noise_energy, constants.EPSILON))
    return VadDecision(is_speech=frame_snr_db > threshold_db, frame_snr_db=frame_snr_db)


def update_noise(profile: NoiseProfile, frame: np.ndarray, decision: VadDecision) -> NoiseProfile:
    """Recursively average the frame power into the profile on non-speech frames.

    mag_sq <- beta * mag_sq + (1 - beta) * |Y|^2; speech frames leave the
    profile untouched.
    """
    if decision.is_speech:
        return profile
    power = np.abs(frame) ** 2
    updated = profile.beta * profile.mag_sq + (1.0 - profile.beta) * power
    return NoiseProfile(mag_sq=updated, beta=profile.beta, init_frame_count=profile.init_frame_count)
