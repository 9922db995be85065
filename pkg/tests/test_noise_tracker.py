"""
Tests for voice activity detection and recursive noise estimation.
"""
import numpy as np
import pytest

from mspp_enhance.dsp.stft import forward_dft
from mspp_enhance.enhancement.noise_tracker import (
    NoiseProfile,
    VadDecision,
    init_noise,
    update_noise,
    vad_classify,
)
from mspp_enhance.utils.exceptions import InsufficientSignalError


@pytest.fixture
def spectra(rng):
    """Ten DFT frames of white noise."""
    return forward_dft(rng.standard_normal((10, 100)))


@pytest.mark.unit
class TestInitNoise:
    """Test the noise bootstrap."""

    def test_mean_power_of_first_frames(self, spectra):
        profile = init_noise(spectra, 6)
        np.testing.assert_allclose(profile.mag_sq, np.mean(np.abs(spectra[:6]) ** 2, axis=0))
        assert profile.init_frame_count == 6
        assert profile.beta == 0.7

    def test_profile_is_symmetric(self, spectra):
        profile = init_noise(spectra, 6)
        for k in range(1, 100):
            assert profile.mag_sq[k] == pytest.approx(profile.mag_sq[100 - k])

    def test_too_few_frames(self, spectra):
        with pytest.raises(InsufficientSignalError, match="needs 6 frames"):
            init_noise(spectra[:5], 6)

    def test_magnitude_is_sqrt(self):
        profile = NoiseProfile(mag_sq=np.array([4.0, 9.0]))
        np.testing.assert_array_equal(profile.magnitude, [2.0, 3.0])


@pytest.mark.unit
class TestVad:
    """Test the energy-ratio voice activity detector."""

    def test_noise_like_frame_is_not_speech(self):
        profile = NoiseProfile(mag_sq=np.ones(4))
        decision = vad_classify(np.ones(4, dtype=complex), profile)
        assert decision.frame_snr_db == pytest.approx(0.0)
        assert not decision.is_speech

    def test_loud_frame_is_speech(self):
        profile = NoiseProfile(mag_sq=np.ones(4))
        decision = vad_classify(np.full(4, np.sqrt(10.0), dtype=complex), profile)
        assert decision.frame_snr_db == pytest.approx(10.0)
        assert decision.is_speech

    @pytest.mark.parametrize("threshold_db,expected", [(9.9, True), (10.1, False)])
    def test_threshold(self, threshold_db, expected):
        profile = NoiseProfile(mag_sq=np.ones(4))
        decision = vad_classify(np.full(4, np.sqrt(10.0), dtype=complex), profile, threshold_db)
        assert decision.is_speech is expected

    def test_silent_frame_and_profile(self):
        decision = vad_classify(np.zeros(4, dtype=complex), NoiseProfile(mag_sq=np.zeros(4)))
        assert decision.frame_snr_db == pytest.approx(0.0)
        assert not decision.is_speech


@pytest.mark.unit
class TestUpdateNoise:
    """Test recursive averaging."""

    def test_non_speech_frame_is_averaged_in(self):
        profile = NoiseProfile(mag_sq=np.ones(3), beta=0.7)
        frame = np.full(3, 2.0, dtype=complex)
        updated = update_noise(profile, frame, VadDecision(is_speech=False, frame_snr_db=0.0))
        np.testing.assert_allclose(updated.mag_sq, 0.7 * 1.0 + 0.3 * 4.0)
        assert updated.beta == 0.7

    def test_speech_frame_leaves_profile(self):
        profile = NoiseProfile(mag_sq=np.ones(3))
        updated = update_noise(profile, np.full(3, 5.0, dtype=complex), VadDecision(True, 20.0))
        assert updated is profile

    def test_update_does_not_mutate(self):
        mag_sq = np.ones(3)
        profile = NoiseProfile(mag_sq=mag_sq)
        update_noise(profile, np.full(3, 3.0, dtype=complex), VadDecision(False, 0.0))
        np.testing.assert_array_equal(mag_sq, np.ones(3))
