"""Batch manifest: the clean x noise x SNR x mode grid run by `mspp batch`."""
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Union

import yaml

from mspp_enhance.enhancement.engine import ENHANCEMENT_MODES
from mspp_enhance.utils.constants import EnhanceMode
from mspp_enhance.utils.exceptions import ConfigurationError


logger = logging.getLogger(__name__)

REQUIRED_KEYS = ('clean', 'noise', 'snr_db')


@dataclass(frozen=True)
class BatchConfig:
    """Parsed batch manifest.

    Relative paths are resolved against the manifest's own directory.

    Attributes:
        clean: Clean speech WAV paths
        noise: Noise WAV paths
        snr_levels_db: Target input SNRs, in the order the CSV rows appear
        modes: Enhancement modes, in the order the CSV columns appear
        seed: Seed for the noise segment offsets
        output_dir: Where mixtures, enhanced files and CSVs go
    """
    clean: List[Path]
    noise: List[Path]
    snr_levels_db: List[float]
    modes: List[str] = field(default_factory=lambda: [EnhanceMode.MSPP.value])
    seed: int = 0
    output_dir: Path = Path('batch_output')

    def cell_count(self) -> int:
        """Number of result rows the grid produces."""
        return len(self.clean) * len(self.noise) * len(self.snr_levels_db) * len(self.modes)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'clean': [str(p) for p in self.clean],
            'noise': [str(p) for p in self.noise],
            'snr_db': list(self.snr_levels_db),
            'modes': list(self.modes),
            'seed': self.seed,
            'output_dir': str(self.output_dir),
        }


def _as_list(value, key):
    if isinstance(value, (str, int, float)):
        return [value]
    if isinstance(value, list) and value:
        return value
    raise ConfigurationError(f"Batch manifest key '{key}' must be a value or a non-empty list")


def _resolve(base: Path, value) -> Path:
    path = Path(str(value))
    return path if path.is_absolute() else base / path


def parse_batch_config(data: Dict[str, Any], base_dir: Union[str, Path] = '.') -> BatchConfig:
    """Validate a batch manifest mapping.

    Raises:
        ConfigurationError: If a key is missing or a value is invalid
    """
    if not isinstance(data, dict):
        raise ConfigurationError("Batch manifest must be a mapping")
    missing = [key for key in REQUIRED_KEYS if key not in data]
    if missing:
        raise ConfigurationError(f"Batch manifest is missing required keys: {', '.join(missing)}")

    base = Path(base_dir)
    snr_levels = []
    for value in _as_list(data['snr_db'], 'snr_db'):
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ConfigurationError(f"SNR levels must be finite numbers, got {value!r}")
        snr_levels.append(float(value))

    modes = [str(m) for m in _as_list(data.get('modes', EnhanceMode.MSPP.value), 'modes')]
    unknown = [m for m in modes if m not in ENHANCEMENT_MODES]
    if unknown:
        raise ConfigurationError(f"Unknown mode(s) {', '.join(unknown)}. Valid modes: {', '.join(ENHANCEMENT_MODES)}")

    seed = data.get('seed', 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigurationError(f"Batch seed must be a non-negative integer, got {seed!r}")

    return BatchConfig(
        clean=[_resolve(base, p) for p in _as_list(data['clean'], 'clean')],
        noise=[_resolve(base, p) for p in _as_list(data['noise'], 'noise')],
        snr_levels_db=snr_levels,
        modes=modes,
        seed=seed,
        output_dir=_resolve(base, data.get('output_dir', 'batch_output')),
    )


def load_batch_config(manifest_path: Union[str, Path]) -> BatchConfig:
    """Read and validate a YAML batch manifest.

    Raises:
        ConfigurationError: If the file is missing, unparsable or invalid
    """
    manifest_path = Path(manifest_path)
    try:
        with open(manifest_path, 'r', encoding='utf-8') as file:
            data = yaml.safe_load(file) or {}
    except FileNotFoundError as e:
        raise ConfigurationError(f"Batch manifest not found: {manifest_path}") from e
    except (OSError, yaml.YAMLError) as e:
        raise ConfigurationError(f"Failed to read batch manifest {manifest_path}: {e}") from e

    config = parse_batch_config(data, os.path.dirname(os.path.abspath(manifest_path)))
    logger.info("Loaded batch manifest %s: %s result rows", manifest_path, config.cell_count())
    return config
