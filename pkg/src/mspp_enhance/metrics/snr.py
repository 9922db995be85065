"""
Objective SNR metrics: overall SNR, segmental SNR and their improvements.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from mspp_enhance.utils.constants import DEFAULT_SEGSNR_FRAME_LEN
from mspp_enhance.utils.exceptions import EvaluationError
from mspp_enhance.utils.models import SampleBuffer


logger = logging.getLogger(__name__)

SNR_CAP_DB = 99.0
RESIDUAL_FLOOR = 1e-20
SEGSNR_MIN_DB = -10.0
SEGSNR_MAX_DB = 35.0
SILENT_FRAME_ENERGY = 1e-12


@dataclass
class EvalReport:
    """Improvement metrics for one (clean, noisy, enhanced) triple.

    pesq is never computed here; the field exists so an externally obtained
    score can be attached to the same report.
    """
    snrseg_improvement_db: float
    overall_snr_improvement_db: float
    input_snr_db: float
    per_frame_segsnr: List[float] = field(default_factory=list)
    segsnr_noisy_db: float = 0.0
    segsnr_enhanced_db: float = 0.0
    overall_snr_enhanced_db: float = 0.0
    pesq: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _check_lengths(clean: SampleBuffer, test: SampleBuffer, test_name: str = 'test') -> None:
    if len(clean) != len(test):
        raise EvaluationError(f"Length mismatch: clean has {len(clean)} samples, {test_name} has {len(test)}")


def overall_snr_db(clean: SampleBuffer, test: SampleBuffer) -> float:
    """10*log10(sum clean^2 / sum (clean - test)^2), capped at 99 dB for a vanishing residual.

    Raises:
        EvaluationError: On a length mismatch or a silent clean signal
    """
    _check_lengths(clean, test)
    signal = clean.energy
    if signal <= 0.0:
        raise EvaluationError("Clean reference has zero energy")
    residual = clean.samples - test.samples
    residual_energy = float(np.dot(residual, residual))
    if residual_energy < RESIDUAL_FLOOR:
        return SNR_CAP_DB
    return 10.0 * math.log10(signal / residual_energy)


def segsnr_db(clean: SampleBuffer, test: SampleBuffer,
              frame_len: int = DEFAULT_SEGSNR_FRAME_LEN) -> Tuple[float, List[float]]:
    """Mean of per-frame SNRs over non-overlapping frames, each clamped to [-10, 35] dB.

    Frames whose clean energy is below 1e-12 are skipped, as is a trailing
    partial frame.

    Returns:
        Tuple of (mean SegSNR in dB, per-frame values)

    Raises:
        EvaluationError: On a length mismatch, bad frame length or no voiced frames
    """
    _check_lengths(clean, test)
    if frame_len <= 0:
        raise EvaluationError(f"SegSNR frame length must be positive, got {frame_len}")
    count = len(clean) // frame_len
    clean_frames = clean.samples[:count * frame_len].reshape(count, frame_len)
    residual_frames = clean_frames - test.samples[:count * frame_len].reshape(count, frame_len)

    clean_energy = np.sum(clean_frames ** 2, axis=1)
    residual_energy = np.sum(residual_frames ** 2, axis=1)
    voiced = clean_energy >= SILENT_FRAME_ENERGY
    if not np.any(voiced):
        raise EvaluationError("no voiced frames")

    with np.errstate(divide='ignore'):
        ratios = 10.0 * np.log10(clean_energy[voiced] / residual_energy[voiced])
    per_frame = np.clip(ratios, SEGSNR_MIN_DB, SEGSNR_MAX_DB)
    return float(np.mean(per_frame)), per_frame.tolist()


def improvement(clean: SampleBuffer, noisy: SampleBuffer, enhanced: SampleBuffer,
                frame_len: int = DEFAULT_SEGSNR_FRAME_LEN) -> EvalReport:
    """SegSNR and overall SNR improvement of enhanced over noisy.

    Raises:
        EvaluationError: Propagated from the base metrics
    """
    _check_lengths(clean, noisy, 'noisy')
    _check_lengths(clean, enhanced, 'enhanced')
    seg_noisy, _ = segsnr_db(clean, noisy, frame_len)
    seg_enhanced, per_frame = segsnr_db(clean, enhanced, frame_len)
    snr_noisy = overall_snr_db(clean, noisy)
    snr_enhanced = overall_snr_db(clean, enhanced)

    report = EvalReport(
        snrseg_improvement_db=seg_enhanced - seg_noisy,
        overall_snr_improvement_db=snr_enhanced - snr_noisy,
        input_snr_db=snr_noisy,
        per_frame_segsnr=per_frame,
        segsnr_noisy_db=seg_noisy,
        segsnr_enhanced_db=seg_enhanced,
        overall_snr_enhanced_db=snr_enhanced,
    )
    logger.info("SegSNR improvement %.3f dB, overall SNR improvement %.3f dB (input %.2f dB)",
                report.snrseg_improvement_db, report.overall_snr_improvement_db, report.input_snr_db)
    return report
