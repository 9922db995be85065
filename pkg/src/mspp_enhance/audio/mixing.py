"""Mixing noise into clean speech at a target SNR."""

import logging
import math
from typing import Tuple

import numpy as np

from mspp_enhance.utils.exceptions import ContractViolationError
from mspp_enhance.utils.models import SampleBuffer


logger = logging.getLogger(__name__)


def mix_at_snr(clean: SampleBuffer, noise: SampleBuffer, snr_db: float) -> Tuple[SampleBuffer, float]:
    """Add scaled noise to clean speech so the mixture has the requested SNR.

    The noise is truncated to the clean length and scaled by s such that
    10*log10(sum(clean**2) / sum((s*noise)**2)) == snr_db. No clamping is
    applied to the mixture.

    Args:
        clean: Clean speech
        noise: Noise, at least as long as clean
        snr_db: Target SNR in dB (finite)

    Returns:
        Tuple of (noisy buffer, noise scale s)

    Raises:
        ContractViolationError: On rate mismatch, short noise, zero energy, or a non-finite SNR
    """
    if not math.isfinite(snr_db):
        raise ContractViolationError(f"SNR must be finite, got {snr_db}")
    if clean.sample_rate_hz != noise.sample_rate_hz:
        raise ContractViolationError(
            f"Sample rate mismatch: clean {clean.sample_rate_hz} Hz, noise {noise.sample_rate_hz} Hz"
        )
    if len(noise) < len(clean):
        raise ContractViolationError(
            f"Noise ({len(noise)} samples) is shorter than clean speech ({len(clean)} samples)"
        )

    noise_samples = noise.samples[:len(clean)]
    clean_energy = clean.energy
    noise_energy = float(np.dot(noise_samples, noise_samples))
    if clean_energy <= 0.0:
        raise ContractViolationError("Clean signal has zero energy")
    if noise_energy <= 0.0:
        raise ContractViolationError("Noise signal has zero energy")

    noise_scale = math.sqrt(clean_energy / (noise_energy * 10.0 ** (snr_db / 10.0)))
    noisy = clean.with_samples(clean.samples + noise_scale * noise_samples)
    logger.info("Mixed noise at %.2f dB SNR (scale %.6g)", snr_db, noise_scale)
    return noisy, noise_scale
