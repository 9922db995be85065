"""
Deterministic synthetic test signals.

Speech-like buffers (harmonic voices with amplitude modulation and silence
gaps) and three noise kinds stand in for a recorded corpus. Every generator
is a pure function of its seed.
"""

import logging
from typing import List, Tuple, Union

import numpy as np
from scipy.signal import lfilter

from mspp_enhance.utils.constants import DEFAULT_SAMPLE_RATE_HZ, NoiseKind
from mspp_enhance.utils.exceptions import ContractViolationError
from mspp_enhance.utils.models import SampleBuffer


logger = logging.getLogger(__name__)

PEAK_LEVEL = 0.5
PITCH_RANGE_HZ = (100.0, 250.0)
HARMONIC_COUNT_RANGE = (3, 5)
ENVELOPE_RATE_RANGE_HZ = (2.0, 6.0)
LEADING_GAP_RANGE_S = (0.15, 0.25)
VOICED_RANGE_S = (0.3, 0.7)
GAP_RANGE_S = (0.12, 0.25)
RAMP_S = 0.01
BABBLE_VOICES = 6
# Pole of the one-pole low-pass used for street noise.
STREET_POLE = 0.95


def _segments(rng: np.random.Generator, total: int, sample_rate_hz: int) -> List[Tuple[int, int]]:
    """Voiced (start, stop) sample ranges separated by silence gaps of >= 120 ms."""
    def draw(bounds):
        return int(round(rng.uniform(*bounds) * sample_rate_hz))

    segments = []
    position = draw(LEADING_GAP_RANGE_S)
    while position < total:
        stop = min(total, position + draw(VOICED_RANGE_S))
        segments.append((position, stop))
        position = stop + draw(GAP_RANGE_S)
    return segments


def _gate(segments: List[Tuple[int, int]], total: int, sample_rate_hz: int) -> np.ndarray:
    """0/1 gate with raised-cosine ramps inside each voiced segment."""
    gate = np.zeros(total)
    ramp_len = max(1, int(RAMP_S * sample_rate_hz))
    for start, stop in segments:
        length = stop - start
        segment = np.ones(length)
        ramp = min(ramp_len, length // 2)
        if ramp > 0:
            rise = 0.5 - 0.5 * np.cos(np.pi * (np.arange(ramp) + 1) / (ramp + 1))
            segment[:ramp] = rise
            segment[length - ramp:] = rise[::-1]
        gate[start:stop] = segment
    return gate


def _voice(rng: np.random.Generator, total: int, sample_rate_hz: int) -> np.ndarray:
    """Harmonic voice with slow pitch drift and a raised amplitude envelope."""
    t = np.arange(total) / sample_rate_hz
    pitch = rng.uniform(*PITCH_RANGE_HZ)
    harmonics = int(rng.integers(HARMONIC_COUNT_RANGE[0], HARMONIC_COUNT_RANGE[1] + 1))
    drift_rate = rng.uniform(0.3, 1.0)
    instantaneous = pitch * (1.0 + 0.03 * np.sin(2.0 * np.pi * drift_rate * t))
    phase = 2.0 * np.pi * np.cumsum(instantaneous) / sample_rate_hz

    voice = np.zeros(total)
    nyquist = sample_rate_hz / 2.0
    for h in range(1, harmonics + 1):
        if h * pitch * 1.03 >= nyquist:
            break
        amplitude = rng.uniform(0.5, 1.0) / h
        voice += amplitude * np.sin(h * phase + rng.uniform(0.0, 2.0 * np.pi))

    env_rate = rng.uniform(*ENVELOPE_RATE_RANGE_HZ)
    envelope = 0.55 - 0.45 * np.cos(2.0 * np.pi * env_rate * t + rng.uniform(0.0, 2.0 * np.pi))
    return voice * envelope


def _peak_normalize(samples: np.ndarray) -> np.ndarray:
    peak = float(np.max(np.abs(samples))) if samples.size else 0.0
    if peak > 0.0:
        return samples * (PEAK_LEVEL / peak)
    return samples


def _sample_count(duration_s: float, sample_rate_hz: int) -> int:
    if duration_s <= 0:
        raise ContractViolationError(f"duration_s must be positive, got {duration_s}")
    if sample_rate_hz <= 0:
        raise ContractViolationError(f"sample_rate_hz must be positive, got {sample_rate_hz}")
    return int(round(duration_s * sample_rate_hz))


def synth_speech_like(seed: int, duration_s: float,
                      sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ) -> SampleBuffer:
    """Generate a deterministic speech-like signal.

    A sum of 3-5 harmonics of a pitch drawn from [100, 250] Hz, modulated by a
    2-6 Hz raised envelope and gated into voiced segments separated by exact
    silence gaps (>= 120 ms, including a leading gap of 150-250 ms so a noise
    tracker has noise-only frames to bootstrap from). Peak is normalised to 0.5.
    Buffers shorter than the leading gap are entirely silent.

    Args:
        seed: Seed for numpy's default generator
        duration_s: Duration in seconds (> 0)
        sample_rate_hz: Sample rate in Hz

    Returns:
        SampleBuffer of round(duration_s * sample_rate_hz) samples
    """
    total = _sample_count(duration_s, sample_rate_hz)
    rng = np.random.default_rng(seed)
    segments = _segments(rng, total, sample_rate_hz)
    samples = _voice(rng, total, sample_rate_hz) * _gate(segments, total, sample_rate_hz)
    logger.debug("Synthesized speech-like seed=%s: %s samples, %s voiced segments", seed, total, len(segments))
    return SampleBuffer(samples=_peak_normalize(samples), sample_rate_hz=sample_rate_hz)


def synth_noise(kind: Union[NoiseKind, str], seed: int, duration_s: float,
                sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ) -> SampleBuffer:
    """Generate deterministic noise of the given kind.

    - white: Gaussian white noise
    - street: white noise through a one-pole low-pass (energy concentrated low)
    - babble: six independent speech-like voices without silence gaps

    All kinds are peak-normalised to 0.5.
    """
    try:
        kind = NoiseKind(kind)
    except ValueError as e:
        raise ContractViolationError(f"Unknown noise kind: {kind!r}") from e

    total = _sample_count(duration_s, sample_rate_hz)
    rng = np.random.default_rng(seed)

    if kind is NoiseKind.WHITE:
        samples = rng.standard_normal(total)
    elif kind is NoiseKind.STREET:
        samples = lfilter([1.0 - STREET_POLE], [1.0, -STREET_POLE], rng.standard_normal(total))
    else:
        samples = np.zeros(total)
        for _ in range(BABBLE_VOICES):
            samples += _voice(rng, total, sample_rate_hz)

    return SampleBuffer(samples=_peak_normalize(samples), sample_rate_hz=sample_rate_hz)
