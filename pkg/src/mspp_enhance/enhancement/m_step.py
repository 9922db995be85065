"""
Magnitude compensation by modified spectral subtraction with cross-terms.

The noise estimate only carries a magnitude, so its phase is taken from the
noisy bin (angle D = angle Y). Under that choice the cross-term chi is real
and H_MSS collapses to |1 - |D|/|Y||, which is never negative: nothing is
ever floored, unlike classical subtraction.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from mspp_enhance.dsp.stft import analyze, synthesize
from mspp_enhance.enhancement.constants import EPSILON
from mspp_enhance.enhancement.diagnostics import StepDiagnostics
from mspp_enhance.enhancement.noise_tracker import (
    NoiseProfile,
    VadDecision,
    init_noise,
    update_noise,
    vad_classify,
)
from mspp_enhance.enhancement.params import EnhancementParams
from mspp_enhance.utils.exceptions import ContractViolationError, InsufficientSignalError
from mspp_enhance.utils.models import SampleBuffer


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MssGainFrame:
    """Gain terms for one frame.

    Attributes:
        h_ss_sq: Classical spectral subtraction gain squared (may be negative)
        chi: Cross-term between speech and noise spectra
        h_mss: Modified gain sqrt(|h_ss_sq - chi|), never negative
        y_mag: Noisy magnitude |Y[k]|
        d_mag: Noise magnitude estimate |D[k]|
    """
    h_ss_sq: np.ndarray
    chi: np.ndarray
    h_mss: np.ndarray
    y_mag: np.ndarray
    d_mag: np.ndarray


def classical_ss_gain_sq(y_mag_sq, d_mag_sq):
    """Square of the classical subtraction gain, 1 - |D|^2 / max(|Y|^2, eps).

    Not clamped; negative values are left for the caller to handle.
    """
    y_mag_sq = np.asarray(y_mag_sq, dtype=np.float64)
    return 1.0 - np.asarray(d_mag_sq, dtype=np.float64) / np.maximum(y_mag_sq, EPSILON)


def cross_term_chi(y, d_mag):
    """Cross-term chi with the noise phase set to the noisy phase.

    chi = (2|Y||D| - 2|D|^2) / max(|Y|^2, eps), real by construction.
    """
    y_mag = np.abs(y)
    d_mag = np.asarray(d_mag, dtype=np.float64)
    return (2.0 * y_mag * d_mag - 2.0 * d_mag * d_mag) / np.maximum(y_mag * y_mag, EPSILON)


def mss_gain(h_ss_sq, chi):
    """Modified gain sqrt(|h_ss_sq - chi|)."""
    return np.sqrt(np.abs(np.asarray(h_ss_sq, dtype=np.float64) - np.asarray(chi, dtype=np.float64)))


def gain_frame(y_frame: np.ndarray, profile: NoiseProfile) -> MssGainFrame:
    """Evaluate all gain terms for one noisy frame."""
    y_mag = np.abs(y_frame)
    d_mag = profile.magnitude
    h_ss_sq = classical_ss_gain_sq(y_mag * y_mag, profile.mag_sq)
    chi = cross_term_chi(y_frame, d_mag)
    return MssGainFrame(h_ss_sq=h_ss_sq, chi=chi, h_mss=mss_gain(h_ss_sq, chi), y_mag=y_mag, d_mag=d_mag)


def closed_form_error(frame: MssGainFrame) -> float:
    """Largest deviation of h_mss**2 from (1 - |D|/|Y|)**2, scaled by max(1, (|D|/|Y|)**2).

    Measured on the squared gain, which is exact to a few ulp even where
    the gain itself is near zero.
    """
    valid = frame.y_mag * frame.y_mag > EPSILON
    if not np.any(valid):
        return 0.0
    ratio = frame.d_mag[valid] / frame.y_mag[valid]
    expected = (1.0 - ratio) ** 2
    deviation = np.abs(frame.h_mss[valid] ** 2 - expected) / np.maximum(1.0, ratio * ratio)
    return float(np.max(deviation))


def apply_magnitude_compensation(y_frame: np.ndarray, profile: NoiseProfile,
                                 diagnostics: Optional[StepDiagnostics] = None) -> np.ndarray:
    """Scale each bin by H_MSS, keeping the noisy phase.

    |Z[k]| = H_MSS[k] * |Y[k]| and angle Z[k] = angle Y[k].

    Raises:
        ContractViolationError: If lengths differ or a gain is negative or not finite
    """
    y_frame = np.asarray(y_frame, dtype=np.complex128)
    if y_frame.shape != profile.mag_sq.shape:
        raise ContractViolationError(
            f"Frame length {y_frame.shape} does not match noise profile length {profile.mag_sq.shape}"
        )
    frame = gain_frame(y_frame, profile)
    if not np.all(np.isfinite(frame.h_mss)) or np.any(frame.h_mss < 0.0):
        raise ContractViolationError("Modified spectral subtraction gain is negative or not finite")

    if diagnostics is not None:
        diagnostics.max_gain_closed_form_error = max(diagnostics.max_gain_closed_form_error,
                                                     closed_form_error(frame))
        if diagnostics.keep_frames:
            diagnostics.frame_traces.append(frame)
    return frame.h_mss * y_frame


def classical_subtraction(y_frame: np.ndarray, profile: NoiseProfile,
                          diagnostics: Optional[StepDiagnostics] = None) -> np.ndarray:
    """Classical power subtraction, half-wave rectified: gain sqrt(max(1 - |D|^2/|Y|^2, 0)).

    Every floored bin counts as one rectification event.
    """
    y_frame = np.asarray(y_frame, dtype=np.complex128)
    h_ss_sq = classical_ss_gain_sq(np.abs(y_frame) ** 2, profile.mag_sq)
    negative = h_ss_sq < 0.0
    if diagnostics is not None:
        diagnostics.rectified_bins += int(np.count_nonzero(negative))
    return np.sqrt(np.where(negative, 0.0, h_ss_sq)) * y_frame


FrameCompensator = Callable[[np.ndarray, NoiseProfile, Optional[StepDiagnostics]], np.ndarray]


def _run_magnitude_ams(noisy: SampleBuffer, params: EnhancementParams, compensate: FrameCompensator,
                       diagnostics: Optional[StepDiagnostics]) -> Tuple[SampleBuffer, List[VadDecision]]:
    """One AMS pass with VAD-gated noise tracking and a per-frame compensator."""
    config = params.m_config
    min_len = params.init_frame_count * config.hop + config.frame_len
    if len(noisy) < min_len:
        raise InsufficientSignalError(
            f"Input has {len(noisy)} samples; noise bootstrap needs at least {min_len}"
        )

    sequence, spectra = analyze(noisy, config)
    profile = init_noise(spectra, params.init_frame_count, params.noise_beta)
    vad_track = []
    compensated = np.empty_like(spectra)

    for index, y_frame in enumerate(spectra):
        decision = vad_classify(y_frame, profile, params.vad_threshold_db)
        compensated[index] = compensate(y_frame, profile, diagnostics)
        profile = update_noise(profile, y_frame, decision)
        vad_track.append(decision)
        logger.debug("Frame %s: snr=%.2f dB speech=%s", index, decision.frame_snr_db, decision.is_speech)

    if diagnostics is not None:
        diagnostics.frames += len(vad_track)
        diagnostics.speech_frames += sum(1 for d in vad_track if d.is_speech)

    return synthesize(compensated, sequence), vad_track


def run_m_step(noisy: SampleBuffer, params: Optional[EnhancementParams] = None,
               diagnostics: Optional[StepDiagnostics] = None) -> Tuple[SampleBuffer, List[VadDecision]]:
    """Full M-step pass producing the intermediate signal z[n].

    Frame -> DFT -> VAD and noise tracking -> H_MSS -> keep noisy phase ->
    real IDFT -> overlap-add. The noise profile applied to frame l is the
    one left after frame l-1.

    Returns:
        Tuple of (intermediate buffer with the input's length, per-frame VAD decisions)

    Raises:
        InsufficientSignalError: If the input is too short for the noise bootstrap
    """
    params = params or EnhancementParams()
    logger.info("M-step: %s samples, frame_len=%s hop=%s", len(noisy), params.m_config.frame_len,
                params.m_config.hop)
    return _run_magnitude_ams(noisy, params, apply_magnitude_compensation, diagnostics)


def run_ss_baseline(noisy: SampleBuffer, params: Optional[EnhancementParams] = None,
                    diagnostics: Optional[StepDiagnostics] = None) -> Tuple[SampleBuffer, List[VadDecision]]:
    """Classical spectral subtraction with the same framing and noise tracking as the M-step."""
    params = params or EnhancementParams()
    logger.info("Classical subtraction baseline: %s samples", len(noisy))
    return _run_magnitude_ams(noisy, params, classical_subtraction, diagnostics)
