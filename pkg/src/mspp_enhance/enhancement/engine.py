"""
Enhancement mode registry.

Every mode takes a noisy SampleBuffer and returns an EnhancementResult with
the enhanced buffer and one StepDiagnostics per AMS pass that ran.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from mspp_enhance.enhancement.diagnostics import StepDiagnostics
from mspp_enhance.enhancement.m_step import run_m_step, run_ss_baseline
from mspp_enhance.enhancement.noise_tracker import VadDecision
from mspp_enhance.enhancement.p_step import CompensationMode, run_p_step
from mspp_enhance.enhancement.params import EnhancementParams
from mspp_enhance.utils.constants import EnhanceMode
from mspp_enhance.utils.exceptions import ConfigurationError, ContractViolationError
from mspp_enhance.utils.models import SampleBuffer


logger = logging.getLogger(__name__)


@dataclass
class EnhancementResult:
    """Output of one enhancement run."""
    output: SampleBuffer
    mode: str
    steps: Dict[str, StepDiagnostics] = field(default_factory=dict)
    vad_track: List[VadDecision] = field(default_factory=list)

    @property
    def rectified_bins(self) -> int:
        return sum(step.rectified_bins for step in self.steps.values())

    @property
    def speech_ratio(self) -> Optional[float]:
        """VAD speech-frame ratio, or None when no magnitude step ran."""
        if not self.vad_track:
            return None
        return sum(1 for d in self.vad_track if d.is_speech) / len(self.vad_track)


def _timed(step: str, keep_frames: bool) -> StepDiagnostics:
    diagnostics = StepDiagnostics(step=step, keep_frames=keep_frames)
    diagnostics.start()
    return diagnostics


def _enhance_mspp(noisy, params, compensation, keep_frames):
    m_diag = _timed('m_step', keep_frames)
    intermediate, vad_track = run_m_step(noisy, params, m_diag)
    m_diag.finish()
    p_diag = _timed('p_step', keep_frames)
    output = run_p_step(intermediate, params, compensation, p_diag)
    p_diag.finish()
    return EnhancementResult(output, EnhanceMode.MSPP.value, {'m_step': m_diag, 'p_step': p_diag}, vad_track)


def _enhance_m_only(noisy, params, compensation, keep_frames):  # pylint: disable=unused-argument
    m_diag = _timed('m_step', keep_frames)
    output, vad_track = run_m_step(noisy, params, m_diag)
    m_diag.finish()
    return EnhancementResult(output, EnhanceMode.M_ONLY.value, {'m_step': m_diag}, vad_track)


def _enhance_p_only(noisy, params, compensation, keep_frames):
    p_diag = _timed('p_step', keep_frames)
    output = run_p_step(noisy, params, compensation, p_diag)
    p_diag.finish()
    return EnhancementResult(output, EnhanceMode.P_ONLY.value, {'p_step': p_diag})


def _enhance_ss_baseline(noisy, params, compensation, keep_frames):  # pylint: disable=unused-argument
    diag = _timed('ss_baseline', keep_frames)
    output, vad_track = run_ss_baseline(noisy, params, diag)
    diag.finish()
    return EnhancementResult(output, EnhanceMode.SS_BASELINE.value, {'ss_baseline': diag}, vad_track)


ModeRunner = Callable[[SampleBuffer, EnhancementParams, CompensationMode, bool], EnhancementResult]

ENHANCEMENT_MODES: Dict[str, ModeRunner] = {
    EnhanceMode.MSPP.value: _enhance_mspp,
    EnhanceMode.M_ONLY.value: _enhance_m_only,
    EnhanceMode.P_ONLY.value: _enhance_p_only,
    EnhanceMode.SS_BASELINE.value: _enhance_ss_baseline,
}


def enhance_buffer(noisy: SampleBuffer, params: Optional[EnhancementParams] = None,
                   mode: str = EnhanceMode.MSPP.value, compensation: Optional[CompensationMode] = None,
                   keep_frames: bool = False) -> EnhancementResult:
    """Run one enhancement mode on a buffer.

    Args:
        noisy: Input buffer
        params: Resolved parameters (defaults when None)
        mode: One of ENHANCEMENT_MODES
        compensation: rho mode for the P-step (probabilistic when None)
        keep_frames: Retain per-frame traces in the diagnostics

    Raises:
        ConfigurationError: If the mode is unknown
    """
    runner = ENHANCEMENT_MODES.get(mode)
    if runner is None:
        raise ConfigurationError(f"Unknown mode '{mode}'. Valid modes: {', '.join(ENHANCEMENT_MODES)}")
    params = params or EnhancementParams()
    compensation = compensation or CompensationMode.probabilistic()
    logger.info("Enhancing %s samples with mode %s", len(noisy), mode)
    result = runner(noisy, params, compensation, keep_frames)
    if len(result.output) != len(noisy):
        raise ContractViolationError(f"Enhanced length {len(result.output)} differs from input length {len(noisy)}")
    return result
