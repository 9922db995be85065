"""Resolved parameter set for a full enhancement run."""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from mspp_enhance.dsp.stft import StftConfig
from mspp_enhance.enhancement import constants
from mspp_enhance.utils.exceptions import ConfigurationError, ContractViolationError


@dataclass(frozen=True)
class EnhancementParams:
    """All constants of both steps, with the P-step thresholds as linear ratios.

    Defaults: mu 0.6, xi_min -10 dB,
    xi_max -5 dB, xi_peak 10 dB, W_local 1, W_global 15, alpha_xi 0.7,
    beta 0.7, Hamming 100/50 for the M-step and modified Hanning 256/192
    for the P-step.
    """
    mu: float = constants.MU
    xi_min: float = constants.db_to_ratio(constants.XI_MIN_DB)
    xi_max: float = constants.db_to_ratio(constants.XI_MAX_DB)
    xi_peak: float = constants.db_to_ratio(constants.XI_PEAK_DB)
    w_local: int = constants.W_LOCAL
    w_global: int = constants.W_GLOBAL
    alpha_xi: float = constants.ALPHA_XI
    m_config: StftConfig = field(default_factory=StftConfig.m_step_default)
    p_config: StftConfig = field(default_factory=StftConfig.p_step_default)
    vad_threshold_db: float = constants.VAD_THRESHOLD_DB
    noise_beta: float = constants.NOISE_BETA
    init_frame_count: int = constants.INIT_FRAME_COUNT

    def __post_init__(self):
        numeric = {
            'mu': self.mu, 'xi_min': self.xi_min, 'xi_max': self.xi_max, 'xi_peak': self.xi_peak,
            'alpha_xi': self.alpha_xi, 'vad_threshold_db': self.vad_threshold_db,
            'noise_beta': self.noise_beta,
        }
        for name, value in numeric.items():
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigurationError(f"{name} must be a finite number, got {value!r}")
        if self.mu <= 0:
            raise ConfigurationError(f"mu must be positive, got {self.mu}")
        if not 0 < self.xi_min < self.xi_max:
            raise ConfigurationError(f"Need 0 < xi_min < xi_max, got {self.xi_min}, {self.xi_max}")
        if self.xi_peak <= 0:
            raise ConfigurationError(f"xi_peak must be positive, got {self.xi_peak}")
        if not 0 < self.alpha_xi < 1:
            raise ConfigurationError(f"alpha_xi must lie in (0, 1), got {self.alpha_xi}")
        if not 0 < self.noise_beta < 1:
            raise ConfigurationError(f"noise_beta must lie in (0, 1), got {self.noise_beta}")
        if not 0 <= int(self.w_local) < int(self.w_global):
            raise ConfigurationError(f"Need 0 <= w_local < w_global, got {self.w_local}, {self.w_global}")
        if int(self.init_frame_count) < 1:
            raise ConfigurationError(f"init_frame_count must be >= 1, got {self.init_frame_count}")

    def to_dict(self) -> Dict[str, Any]:
        """Fully resolved parameters, dB-valued where the config file is."""
        return {
            'm_step': {
                **self.m_config.to_dict(),
                'noise_beta': self.noise_beta,
                'vad_threshold_db': self.vad_threshold_db,
                'init_frame_count': self.init_frame_count,
            },
            'p_step': {
                **self.p_config.to_dict(),
                'mu': self.mu,
                'xi_min_db': round(10.0 * math.log10(self.xi_min), 12),
                'xi_max_db': round(10.0 * math.log10(self.xi_max), 12),
                'xi_peak_db': round(10.0 * math.log10(self.xi_peak), 12),
                'w_local': self.w_local,
                'w_global': self.w_global,
                'alpha_xi': self.alpha_xi,
            },
        }


def _number(section: Dict[str, Any], key: str, default, cast=float):
    value = section.get(key, default)
    if isinstance(value, bool):
        raise ConfigurationError(f"{key} must be numeric, got {value!r}")
    try:
        return cast(value)
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"{key} must be numeric, got {value!r}") from e


def _stft_config(section: Dict[str, Any], default: StftConfig) -> StftConfig:
    try:
        return StftConfig(
            window_kind=section.get('window', default.window_kind.value),
            frame_len=_number(section, 'frame_len', default.frame_len, int),
            hop=_number(section, 'hop', default.hop, int),
        )
    except ContractViolationError as e:
        raise ConfigurationError(str(e)) from e


def params_from_config(config: Optional[Dict[str, Any]]) -> EnhancementParams:
    """Build EnhancementParams from the m_step / p_step config sections.

    Presence thresholds are read in dB and converted to linear ratios here.

    Raises:
        ConfigurationError: If a value is malformed or out of range
    """
    config = config or {}
    m_section = config.get('m_step') or {}
    p_section = config.get('p_step') or {}
    if not isinstance(m_section, dict) or not isinstance(p_section, dict):
        raise ConfigurationError("m_step and p_step config sections must be mappings")

    return EnhancementParams(
        mu=_number(p_section, 'mu', constants.MU),
        xi_min=constants.db_to_ratio(_number(p_section, 'xi_min_db', constants.XI_MIN_DB)),
        xi_max=constants.db_to_ratio(_number(p_section, 'xi_max_db', constants.XI_MAX_DB)),
        xi_peak=constants.db_to_ratio(_number(p_section, 'xi_peak_db', constants.XI_PEAK_DB)),
        w_local=_number(p_section, 'w_local', constants.W_LOCAL, int),
        w_global=_number(p_section, 'w_global', constants.W_GLOBAL, int),
        alpha_xi=_number(p_section, 'alpha_xi', constants.ALPHA_XI),
        m_config=_stft_config(m_section, StftConfig.m_step_default()),
        p_config=_stft_config(p_section, StftConfig.p_step_default()),
        vad_threshold_db=_number(m_section, 'vad_threshold_db', constants.VAD_THRESHOLD_DB),
        noise_beta=_number(m_section, 'noise_beta', constants.NOISE_BETA),
        init_frame_count=_number(m_section, 'init_frame_count', constants.INIT_FRAME_COUNT, int),
    )
