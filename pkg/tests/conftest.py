"""
Shared pytest fixtures and configuration for all tests.

This module provides fixtures for:
- Temporary directories and cleanup
- Deterministic speech-like and noise buffers
- WAV files written from those buffers
- Configuration data and files
"""

import shutil
import tempfile
from pathlib import Path
from typing import Any, Callable, Dict, Generator

import numpy as np
import pytest
import yaml

from mspp_enhance.audio.mixing import mix_at_snr
from mspp_enhance.audio.synthesis import synth_noise, synth_speech_like
from mspp_enhance.audio.wav_io import write_wav
from mspp_enhance.utils.models import SampleBuffer


SAMPLE_RATE = 8000


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory that is cleaned up after the test."""
    temp_path = Path(tempfile.mkdtemp(prefix="mspp_test_"))
    try:
        yield temp_path
    finally:
        shutil.rmtree(temp_path, ignore_errors=True)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so failures are reproducible."""
    return np.random.default_rng(1234)


@pytest.fixture
def speech() -> SampleBuffer:
    """Two seconds of speech-like signal with a silent lead-in."""
    return synth_speech_like(seed=7, duration_s=2.0, sample_rate_hz=SAMPLE_RATE)


@pytest.fixture
def white_noise() -> SampleBuffer:
    """Three seconds of white noise (longer than `speech`)."""
    return synth_noise('white', seed=99, duration_s=3.0, sample_rate_hz=SAMPLE_RATE)


@pytest.fixture
def noisy_speech(speech: SampleBuffer, white_noise: SampleBuffer) -> SampleBuffer:
    """`speech` mixed with white noise at 5 dB."""
    segment = white_noise.with_samples(white_noise.samples[:len(speech)])
    noisy, _ = mix_at_snr(speech, segment, 5.0)
    return noisy


@pytest.fixture
def wav_writer(temp_dir: Path) -> Callable[[str, SampleBuffer], Path]:
    """Write a buffer to temp_dir/<name> and return the path."""
    def _write(name: str, buffer: SampleBuffer) -> Path:
        path = temp_dir / name
        write_wav(buffer, path)
        return path
    return _write


@pytest.fixture
def wav_triple(speech, white_noise, wav_writer) -> Dict[str, Path]:
    """clean.wav and noise.wav in temp_dir."""
    return {
        'clean': wav_writer('clean.wav', speech),
        'noise': wav_writer('noise.wav', white_noise),
    }


@pytest.fixture
def minimal_config_data() -> Dict[str, Any]:
    """Configuration with only a logging section."""
    return {
        "logging": {
            "file": "logs/test.log",
            "level": "INFO"
        }
    }


@pytest.fixture
def config_file(temp_dir: Path, minimal_config_data: Dict[str, Any]) -> Path:
    """Write minimal_config_data to a YAML file, with the log inside temp_dir."""
    data = dict(minimal_config_data)
    data['logging'] = {**data['logging'], 'file': str(temp_dir / 'logs' / 'test.log')}
    path = temp_dir / "config.yaml"
    with open(path, 'w', encoding='utf-8') as f:
        yaml.safe_dump(data, f)
    return path
