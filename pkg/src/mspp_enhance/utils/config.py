"""Configuration file utilities for loading and parsing YAML config files."""
import logging
import os
from typing import Any, Dict, Mapping, Optional

import yaml

from mspp_enhance.enhancement import constants as enh
from mspp_enhance.utils.constants import (
    DEFAULT_LOG_FILE,
    DEFAULT_LOG_LEVEL,
    DEFAULT_SEGSNR_FRAME_LEN,
    ENV_LOG_LEVEL,
    VALID_LOG_LEVELS,
)
from mspp_enhance.utils.exceptions import ConfigurationError


logger = logging.getLogger(__name__)


def _section(config, name):
    config.setdefault(name, {})
    if config[name] is None:
        config[name] = {}
    if not isinstance(config[name], dict):
        raise ConfigurationError(f"Config section '{name}' must be a mapping, got {type(config[name]).__name__}")
    return config[name]


def _load_config_defaults(config):
    # Ensure we have a dict to work with
    if not isinstance(config, dict):
        config = {}

    # Magnitude step (framing, VAD, noise tracking)
    m_step = _section(config, 'm_step')
    m_step.setdefault('window', 'hamming')
    m_step.setdefault('frame_len', 100)
    m_step.setdefault('hop', 50)
    m_step.setdefault('noise_beta', enh.NOISE_BETA)
    m_step.setdefault('vad_threshold_db', enh.VAD_THRESHOLD_DB)
    m_step.setdefault('init_frame_count', enh.INIT_FRAME_COUNT)

    # Phase step, thresholds in dB
    p_step = _section(config, 'p_step')
    p_step.setdefault('window', 'modified_hanning')
    p_step.setdefault('frame_len', 256)
    p_step.setdefault('hop', 192)
    p_step.setdefault('mu', enh.MU)
    p_step.setdefault('xi_min_db', enh.XI_MIN_DB)
    p_step.setdefault('xi_max_db', enh.XI_MAX_DB)
    p_step.setdefault('xi_peak_db', enh.XI_PEAK_DB)
    p_step.setdefault('w_local', enh.W_LOCAL)
    p_step.setdefault('w_global', enh.W_GLOBAL)
    p_step.setdefault('alpha_xi', enh.ALPHA_XI)

    metrics = _section(config, 'metrics')
    metrics.setdefault('segsnr_frame_len', DEFAULT_SEGSNR_FRAME_LEN)

    batch = _section(config, 'batch')
    batch.setdefault('workers', 1)

    manifest = _section(config, 'manifest')
    manifest.setdefault('include_timings', False)

    log = _section(config, 'logging')
    log.setdefault('file', DEFAULT_LOG_FILE)
    log.setdefault('level', DEFAULT_LOG_LEVEL)

    return config


def _validate(config):
    level = str(config['logging']['level']).upper()
    if level not in VALID_LOG_LEVELS:
        raise ConfigurationError(f"Invalid log level '{config['logging']['level']}'. Valid: {', '.join(VALID_LOG_LEVELS)}")
    config['logging']['level'] = level

    for section, key in (('metrics', 'segsnr_frame_len'), ('batch', 'workers')):
        value = config[section][key]
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise ConfigurationError(f"{section}.{key} must be a positive integer, got {value!r}")

    if not isinstance(config['manifest']['include_timings'], bool):
        raise ConfigurationError("manifest.include_timings must be true or false")


def apply_env_overrides(config: Dict[str, Any], environ: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    """Apply environment overrides on top of YAML values.

    Priority: CLI arg > ENV var > config file > default. Only the log level is
    configurable through the environment.
    """
    environ = os.environ if environ is None else environ
    env_level = environ.get(ENV_LOG_LEVEL)
    if env_level:
        config.setdefault('logging', {})['level'] = env_level
    return config


def read_config_from_yaml(config_file: Optional[str] = None, required: bool = False,
                          environ: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    """Read and parse a YAML configuration file with defaults.

    A missing file yields the all-defaults configuration unless `required`
    is set (the path came from --config or MSPP_CONFIG).

    Args:
        config_file: Path to YAML config file, or None for defaults only
        required: Raise when the file does not exist
        environ: Environment mapping for overrides (default: os.environ)

    Returns:
        dict: Configuration dictionary with all defaults applied

    Raises:
        ConfigurationError: If the file is required but missing, unreadable or invalid
    """
    config = {}
    if config_file is not None:
        if os.path.isfile(config_file):
            try:
                with open(config_file, 'r', encoding='utf-8') as file:
                    config = yaml.safe_load(file) or {}
            except (PermissionError, OSError, yaml.YAMLError) as e:
                raise ConfigurationError(f"Error reading configuration from {config_file}: {e}") from e
            if not isinstance(config, dict):
                raise ConfigurationError(f"Configuration in {config_file} must be a mapping")
        elif required:
            raise ConfigurationError(f"Configuration file not found: {config_file}")

    config = _load_config_defaults(config)
    apply_env_overrides(config, environ)
    _validate(config)
    return config
