"""Objective metrics and spectrogram export."""

from mspp_enhance.metrics.snr import EvalReport, improvement, overall_snr_db, segsnr_db
from mspp_enhance.metrics.spectrogram import spectrogram_export

__all__ = ['EvalReport', 'improvement', 'overall_snr_db', 'segsnr_db', 'spectrogram_export']
