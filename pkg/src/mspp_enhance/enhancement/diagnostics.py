"""Per-step diagnostics collected while a pipeline runs."""
import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional


logger = logging.getLogger(__name__)


@dataclass
class StepDiagnostics:
    """Counters and extrema for one AMS pass.

    Passed into run_m_step / run_p_step / run_ss_baseline and filled in as
    frames are processed. Set keep_frames to retain per-frame traces
    (MssGainFrame or PhaseCompFrame objects) for inspection.
    """
    step: str
    keep_frames: bool = False
    frames: int = 0
    speech_frames: int = 0
    rectified_bins: int = 0
    max_gain_closed_form_error: float = 0.0
    max_imag_residue: float = 0.0
    unprojected_imag_residue: float = 0.0
    discarded_imag_energy_ratio: float = 0.0
    min_probability: Optional[float] = None
    max_probability: Optional[float] = None
    duration_seconds: float = 0.0
    frame_traces: List[Any] = field(default_factory=list)
    _started: Optional[float] = field(default=None, repr=False)

    def start(self) -> None:
        """Start the wall-clock timer."""
        self._started = time.perf_counter()

    def finish(self) -> None:
        """Stop the timer and log a summary line."""
        if self._started is not None:
            self.duration_seconds = time.perf_counter() - self._started
        logger.info(
            "%s completed in %.3fs: frames=%s, speech_frames=%s, rectified_bins=%s, max_imag_residue=%.3g",
            self.step, self.duration_seconds, self.frames, self.speech_frames,
            self.rectified_bins, self.max_imag_residue
        )

    def record_probabilities(self, low: float, high: float) -> None:
        """Track the running min/max over all probabilities and rho values."""
        self.min_probability = low if self.min_probability is None else min(self.min_probability, low)
        self.max_probability = high if self.max_probability is None else max(self.max_probability, high)

    @property
    def speech_ratio(self) -> float:
        """Fraction of frames the VAD marked as speech."""
        return self.speech_frames / self.frames if self.frames else 0.0

    def to_dict(self) -> Dict[str, Any]:
        """Deterministic summary (no wall-clock values)."""
        return {
            'frames': self.frames,
            'speech_frames': self.speech_frames,
            'speech_ratio': self.speech_ratio,
            'rectified_bins': self.rectified_bins,
            'max_gain_closed_form_error': self.max_gain_closed_form_error,
            'max_imag_residue': self.max_imag_residue,
            'unprojected_imag_residue': self.unprojected_imag_residue,
            'discarded_imag_energy_ratio': self.discarded_imag_energy_ratio,
            'min_probability': self.min_probability,
            'max_probability': self.max_probability,
        }
