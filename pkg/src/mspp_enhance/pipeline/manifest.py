"""Run manifests and deterministic JSON report writing."""
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

from mspp_enhance.utils.exceptions import ReportGenerationError


logger = logging.getLogger(__name__)


@dataclass
class RunManifest:
    """Record of one pipeline command.

    Timings are kept for console display and only serialised on request, so
    two identical runs produce byte-identical manifests.
    """
    command: str
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)
    mode: Optional[str] = None
    compensation: Optional[Dict[str, Any]] = None
    params: Dict[str, Any] = field(default_factory=dict)
    sample_rate_hz: Optional[int] = None
    samples: Optional[int] = None
    speech_ratio: Optional[float] = None
    diagnostics: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    metrics: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)

    def to_dict(self, include_timings: bool = False) -> Dict[str, Any]:
        """Serialisable view of the manifest."""
        from mspp_enhance import __version__ as APP_VERSION

        data = {
            'version': APP_VERSION,
            'command': self.command,
            'inputs': dict(self.inputs),
            'outputs': dict(self.outputs),
            'mode': self.mode,
            'compensation': self.compensation,
            'params': self.params,
            'sample_rate_hz': self.sample_rate_hz,
            'samples': self.samples,
            'speech_ratio': self.speech_ratio,
            'diagnostics': self.diagnostics,
            'metrics': self.metrics,
            'details': self.details,
        }
        if include_timings:
            data['timings'] = dict(self.timings)
        return data


def write_json(data: Dict[str, Any], path: Union[str, Path]) -> Path:
    """Write JSON with sorted keys through a temporary sibling file.

    Raises:
        ReportGenerationError: If the file cannot be written
    """
    path = Path(path)
    tmp_path = path.with_name(f".{path.name}.tmp")
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp_path, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, sort_keys=True)
            f.write('\n')
        os.replace(tmp_path, path)
    except (OSError, TypeError, ValueError) as e:
        if tmp_path.exists():
            tmp_path.unlink()
        error_msg = f"Failed to write report to {path}: {e}"
        logger.error(error_msg)
        raise ReportGenerationError(error_msg) from e

    logger.info("Wrote report to %s (%s bytes)", path, f"{path.stat().st_size:,}")
    return path


class ManifestWriter:  # pylint: disable=too-few-public-methods
    """Write RunManifests as JSON files."""

    def __init__(self, include_timings: bool = False):
        self.include_timings = include_timings

    def write(self, manifest: RunManifest, path: Union[str, Path]) -> Path:
        """Write one manifest.

        Raises:
            ReportGenerationError: If the file cannot be written
        """
        return write_json(manifest.to_dict(self.include_timings), path)
