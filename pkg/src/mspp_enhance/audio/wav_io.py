"""16-bit PCM mono WAV reading and writing.

Only RIFF/WAVE, PCM format code 1, 16-bit, one channel is accepted; anything
else is reported rather than converted.
"""

import logging
import os
from pathlib import Path
from typing import Union

import numpy as np
import soundfile as sf

from mspp_enhance.utils.exceptions import AudioIOError
from mspp_enhance.utils.models import SampleBuffer


logger = logging.getLogger(__name__)

PCM16_SCALE = 32768.0
# Largest representable sample: 1 - 2**-15.
PCM16_MAX = (PCM16_SCALE - 1.0) / PCM16_SCALE


def read_wav(path: Union[str, Path]) -> SampleBuffer:
    """Read a 16-bit PCM mono WAV file.

    Samples are scaled to [-1, 1) by dividing by 32768.

    Args:
        path: WAV file path

    Returns:
        SampleBuffer with the header's sample rate

    Raises:
        AudioIOError: If the file is missing, malformed, not 16-bit PCM, or not mono
    """
    path = Path(path)
    if not path.is_file():
        raise AudioIOError(f"Audio file not found: {path}")

    try:
        info = sf.info(str(path))
    except RuntimeError as e:
        raise AudioIOError(f"Malformed WAV header in {path}: {e}") from e

    if info.format != 'WAV':
        raise AudioIOError(f"Unsupported container in {path}: {info.format} (expected WAV)")
    if info.subtype != 'PCM_16':
        raise AudioIOError(f"Unsupported encoding in {path}: {info.subtype} (expected PCM_16)")
    if info.channels != 1:
        raise AudioIOError(f"Unsupported channel count in {path}: {info.channels} (expected 1)")

    try:
        data, sample_rate = sf.read(str(path), dtype='int16', always_2d=False)
    except RuntimeError as e:
        raise AudioIOError(f"Failed to read audio data from {path}: {e}") from e

    samples = np.asarray(data, dtype=np.float64).reshape(-1) / PCM16_SCALE
    logger.info("Read %s samples at %s Hz from %s", samples.shape[0], sample_rate, path)
    return SampleBuffer(samples=samples, sample_rate_hz=sample_rate)


def quantize_pcm16(samples: np.ndarray) -> np.ndarray:
    """Clamp to [-1, 1 - 2**-15] and round to int16 codes."""
    clamped = np.clip(np.asarray(samples, dtype=np.float64), -1.0, PCM16_MAX)
    return np.round(clamped * PCM16_SCALE).astype(np.int16)


def write_wav(buffer: SampleBuffer, path: Union[str, Path]) -> None:
    """Write a buffer as a 16-bit PCM mono WAV file.

    The file is written next to its destination and renamed into place, so a
    failed write never leaves a partial file behind.

    Raises:
        AudioIOError: If the file cannot be written
    """
    path = Path(path)
    codes = quantize_pcm16(buffer.samples)
    tmp_path = path.with_name(f".{path.name}.tmp")
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        sf.write(str(tmp_path), codes, buffer.sample_rate_hz, subtype='PCM_16', format='WAV')
        os.replace(tmp_path, path)
    except (OSError, RuntimeError) as e:
        if tmp_path.exists():
            tmp_path.unlink()
        raise AudioIOError(f"Failed to write WAV to {path}: {e}") from e

    logger.info("Wrote %s samples at %s Hz to %s", codes.shape[0], buffer.sample_rate_hz, path)
