"""Magnitude and phase compensation steps."""

from mspp_enhance.enhancement.engine import ENHANCEMENT_MODES, EnhancementResult, enhance_buffer
from mspp_enhance.enhancement.m_step import run_m_step, run_ss_baseline
from mspp_enhance.enhancement.p_step import CompensationMode, run_p_step
from mspp_enhance.enhancement.params import EnhancementParams, params_from_config

__all__ = [
    'ENHANCEMENT_MODES',
    'EnhancementResult',
    'enhance_buffer',
    'run_m_step',
    'run_ss_baseline',
    'CompensationMode',
    'run_p_step',
    'EnhancementParams',
    'params_from_config',
]
