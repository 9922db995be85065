"""Spectrogram export as CSV rows or a binary PGM image."""
import logging
import os
from pathlib import Path
from typing import Union

import numpy as np

from mspp_enhance.dsp.stft import StftConfig, analyze
from mspp_enhance.utils.constants import SpectrogramFormat
from mspp_enhance.utils.exceptions import InsufficientSignalError, ReportGenerationError
from mspp_enhance.utils.models import SampleBuffer


logger = logging.getLogger(__name__)

MAGNITUDE_FLOOR = 1e-10
PGM_DB_RANGE = (-80.0, 0.0)


def magnitude_db(buffer: SampleBuffer, config: StftConfig) -> np.ndarray:
    """Per-frame magnitude in dB, 20*log10(|X| + 1e-10), bins 0..N/2.

    Returns:
        Array of shape (frames, N/2 + 1)

    Raises:
        InsufficientSignalError: If the buffer is shorter than one frame
    """
    if len(buffer) < config.frame_len:
        raise InsufficientSignalError(
            f"Spectrogram needs at least {config.frame_len} samples, got {len(buffer)}"
        )
    _, spectra = analyze(buffer, config)
    half = spectra[:, :config.dft_size // 2 + 1]
    return 20.0 * np.log10(np.abs(half) + MAGNITUDE_FLOOR)


def to_gray(db: np.ndarray) -> np.ndarray:
    """Map dB values in [-80, 0] linearly onto 0..255; image rows run from high to low frequency."""
    low, high = PGM_DB_RANGE
    scaled = (np.clip(db, low, high) - low) / (high - low) * 255.0
    return np.round(scaled).astype(np.uint8).T[::-1]


def _write_atomic(path: Path, payload_writer) -> None:
    tmp_path = path.with_name(f".{path.name}.tmp")
    try:
        with open(tmp_path, 'wb') as handle:
            payload_writer(handle)
        os.replace(tmp_path, path)
    except OSError as e:
        if tmp_path.exists():
            tmp_path.unlink()
        raise ReportGenerationError(f"Failed to write spectrogram to {path}: {e}") from e


def spectrogram_export(buffer: SampleBuffer, config: StftConfig, path: Union[str, Path],
                       fmt: Union[SpectrogramFormat, str] = SpectrogramFormat.CSV) -> Path:
    """Write the dB spectrogram of a buffer.

    csv: one comma-separated row per frame, 6 significant digits.
    pgm: binary P5 image, width = frames, height = N/2 + 1, maxval 255.

    Raises:
        InsufficientSignalError: If the buffer is shorter than one frame
        ReportGenerationError: If the file cannot be written
    """
    fmt = SpectrogramFormat(fmt)
    path = Path(path)
    db = magnitude_db(buffer, config)

    if fmt is SpectrogramFormat.CSV:
        def writer(handle):
            np.savetxt(handle, db, fmt='%.6g', delimiter=',', newline='\n')
    else:
        image = to_gray(db)

        def writer(handle):
            height, width = image.shape
            handle.write(f"P5\n{width} {height}\n255\n".encode('ascii'))
            handle.write(image.tobytes())

    _write_atomic(path, writer)
    logger.info("Wrote %s spectrogram (%s frames x %s bins) to %s", fmt.value, db.shape[0], db.shape[1], path)
    return path
