"""
Tests for overall SNR, segmental SNR and improvement reports.
"""
import math

import numpy as np
import pytest

from mspp_enhance.metrics.snr import EvalReport, improvement, overall_snr_db, segsnr_db
from mspp_enhance.utils.exceptions import EvaluationError
from mspp_enhance.utils.models import SampleBuffer


def _buffer(samples):
    return SampleBuffer(np.asarray(samples, dtype=float), 8000)


@pytest.mark.unit
class TestOverallSnr:
    """Test overall SNR."""

    def test_known_value(self):
        clean = _buffer(np.ones(100))
        assert overall_snr_db(clean, _buffer(np.full(100, 0.9))) == pytest.approx(20.0)

    def test_identical_signals_capped(self):
        clean = _buffer(np.ones(10))
        assert overall_snr_db(clean, clean) == 99.0

    @pytest.mark.parametrize("gain", [0.5, 2.0, 10.0])
    def test_error_scaling(self, rng, gain):
        clean = _buffer(rng.standard_normal(500))
        error = rng.standard_normal(500) * 0.1
        base = overall_snr_db(clean, _buffer(clean.samples + error))
        scaled = overall_snr_db(clean, _buffer(clean.samples + gain * error))
        assert scaled == pytest.approx(base - 20.0 * math.log10(gain))

    def test_length_mismatch(self):
        with pytest.raises(EvaluationError, match="Length mismatch"):
            overall_snr_db(_buffer(np.ones(10)), _buffer(np.ones(11)))

    def test_silent_reference(self):
        with pytest.raises(EvaluationError, match="zero energy"):
            overall_snr_db(_buffer(np.zeros(10)), _buffer(np.ones(10)))


@pytest.mark.unit
class TestSegSnr:
    """Test segmental SNR."""

    def test_per_frame_values(self):
        clean = np.ones(320)
        test = np.concatenate([np.full(160, 0.9), np.full(160, 0.99)])
        mean, per_frame = segsnr_db(_buffer(clean), _buffer(test), 160)
        assert per_frame == pytest.approx([20.0, 35.0])
        assert mean == pytest.approx(27.5)

    def test_clamped_low(self):
        clean = _buffer(np.full(160, 0.01))
        _, per_frame = segsnr_db(clean, _buffer(np.full(160, 1.0)), 160)
        assert per_frame == [-10.0]

    def test_identical_frame_clamped_high(self):
        clean = _buffer(np.ones(160))
        mean, _ = segsnr_db(clean, clean, 160)
        assert mean == 35.0

    def test_silent_frames_skipped(self):
        clean = _buffer(np.concatenate([np.zeros(160), np.ones(160)]))
        test = _buffer(np.concatenate([np.ones(160), np.full(160, 0.9)]))
        mean, per_frame = segsnr_db(clean, test, 160)
        assert len(per_frame) == 1
        assert mean == pytest.approx(20.0)

    def test_trailing_partial_frame_dropped(self):
        clean = _buffer(np.ones(250))
        _, per_frame = segsnr_db(clean, _buffer(np.full(250, 0.9)), 160)
        assert len(per_frame) == 1

    def test_no_voiced_frames(self):
        with pytest.raises(EvaluationError, match="no voiced frames"):
            segsnr_db(_buffer(np.zeros(320)), _buffer(np.ones(320)), 160)

    def test_invalid_frame_length(self):
        with pytest.raises(EvaluationError):
            segsnr_db(_buffer(np.ones(10)), _buffer(np.ones(10)), 0)


@pytest.mark.unit
class TestImprovement:
    """Test improvement reports."""

    def test_perfect_enhancement(self, speech, noisy_speech):
        report = improvement(speech, noisy_speech, speech)
        assert report.snrseg_improvement_db > 0.0
        assert report.overall_snr_improvement_db > 0.0
        assert report.segsnr_enhanced_db == pytest.approx(35.0)
        assert report.overall_snr_enhanced_db == 99.0

    def test_no_enhancement(self, speech, noisy_speech):
        report = improvement(speech, noisy_speech, noisy_speech)
        assert report.snrseg_improvement_db == 0.0
        assert report.overall_snr_improvement_db == 0.0

    def test_input_snr(self, speech, noisy_speech):
        assert improvement(speech, noisy_speech, noisy_speech).input_snr_db == pytest.approx(5.0)

    def test_report_dict(self, speech, noisy_speech):
        data = improvement(speech, noisy_speech, noisy_speech, 256).to_dict()
        assert set(data) == {
            'snrseg_improvement_db', 'overall_snr_improvement_db', 'input_snr_db', 'per_frame_segsnr',
            'segsnr_noisy_db', 'segsnr_enhanced_db', 'overall_snr_enhanced_db', 'pesq',
        }
        assert data['pesq'] is None

    def test_enhanced_length_mismatch(self, speech, noisy_speech):
        short = noisy_speech.with_samples(noisy_speech.samples[:-1])
        with pytest.raises(EvaluationError, match="enhanced"):
            improvement(speech, noisy_speech, short)

    def test_defaults(self):
        report = EvalReport(snrseg_improvement_db=1.0, overall_snr_improvement_db=2.0, input_snr_db=0.0)
        assert report.per_frame_segsnr == []
        assert report.pesq is None
