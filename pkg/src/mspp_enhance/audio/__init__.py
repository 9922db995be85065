"""WAV I/O, SNR mixing and synthetic test signals."""

from mspp_enhance.audio.mixing import mix_at_snr
from mspp_enhance.audio.synthesis import synth_noise, synth_speech_like
from mspp_enhance.audio.wav_io import read_wav, write_wav

__all__ = ['mix_at_snr', 'synth_noise', 'synth_speech_like', 'read_wav', 'write_wav']
