"""
Tests for spectrogram export.
"""
import numpy as np
import pytest

from mspp_enhance.dsp.stft import StftConfig
from mspp_enhance.metrics.spectrogram import magnitude_db, spectrogram_export, to_gray
from mspp_enhance.utils.constants import SpectrogramFormat
from mspp_enhance.utils.exceptions import InsufficientSignalError, ReportGenerationError
from mspp_enhance.utils.models import SampleBuffer


@pytest.fixture
def tone():
    """One second of a 1 kHz sine (bin 32 of a 256-point DFT at 8 kHz)."""
    t = np.arange(8000) / 8000
    return SampleBuffer(0.5 * np.sin(2 * np.pi * 1000.0 * t), 8000)


@pytest.mark.unit
class TestMagnitudeDb:
    """Test the dB magnitude matrix."""

    @pytest.mark.parametrize("config,bins", [(StftConfig.p_step_default(), 129), (StftConfig.m_step_default(), 51)])
    def test_shape(self, tone, config, bins):
        db = magnitude_db(tone, config)
        assert db.shape == (-(-8000 // config.hop), bins)

    def test_peak_at_tone_bin(self, tone):
        db = magnitude_db(tone, StftConfig.p_step_default())
        assert int(np.argmax(db[5])) == 32

    def test_silence_floor(self):
        db = magnitude_db(SampleBuffer(np.zeros(512), 8000), StftConfig.p_step_default())
        np.testing.assert_allclose(db, -200.0)

    def test_too_short(self):
        with pytest.raises(InsufficientSignalError):
            magnitude_db(SampleBuffer(np.zeros(100), 8000), StftConfig.p_step_default())


@pytest.mark.unit
class TestToGray:
    """Test the dB to grey level mapping."""

    def test_range_and_clipping(self):
        gray = to_gray(np.array([[0.0, -40.0, -80.0, -200.0, 20.0]]))
        # One frame becomes one column; the highest bin is the top row
        assert gray[:, 0].tolist() == [255, 0, 0, 128, 255]

    def test_orientation(self):
        db = np.full((3, 4), -80.0)
        db[:, 0] = 0.0
        gray = to_gray(db)
        assert gray.shape == (4, 3)
        assert gray[-1].tolist() == [255, 255, 255]
        assert gray[0].tolist() == [0, 0, 0]


@pytest.mark.unit
class TestSpectrogramExport:
    """Test CSV and PGM files."""

    def test_csv(self, tone, temp_dir):
        path = spectrogram_export(tone, StftConfig.p_step_default(), temp_dir / "tone.csv", 'csv')
        data = np.loadtxt(path, delimiter=',')
        assert data.shape == (42, 129)
        np.testing.assert_allclose(data, magnitude_db(tone, StftConfig.p_step_default()), rtol=1e-5, atol=1e-4)

    def test_pgm(self, tone, temp_dir):
        path = spectrogram_export(tone, StftConfig.p_step_default(), temp_dir / "tone.pgm", SpectrogramFormat.PGM)
        content = path.read_bytes()
        header = b"P5\n42 129\n255\n"
        assert content.startswith(header)
        assert len(content) == len(header) + 42 * 129

    def test_missing_directory(self, tone, temp_dir):
        with pytest.raises(ReportGenerationError):
            spectrogram_export(tone, StftConfig.p_step_default(), temp_dir / "missing" / "tone.csv")

    def test_unknown_format(self, tone, temp_dir):
        with pytest.raises(ValueError):
            spectrogram_export(tone, StftConfig.p_step_default(), temp_dir / "tone.png", 'png')
