"""Domain models shared across packages."""
from dataclasses import dataclass

import numpy as np

from mspp_enhance.utils.exceptions import ContractViolationError


@dataclass(frozen=True)
class SampleBuffer:
    """Mono time-domain signal with its sample rate.

    Used for the noisy input y[n], the clean reference x[n], the noise d[n],
    the intermediate signal z[n] and the enhanced output.

    Attributes:
        samples: 1-D float64 array, nominal range [-1, 1]
        sample_rate_hz: Positive sample rate in Hz
    """
    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ContractViolationError(f"Samples must be one-dimensional, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise ContractViolationError("Samples contain NaN or Inf")
        if int(self.sample_rate_hz) <= 0:
            raise ContractViolationError(f"Sample rate must be positive, got {self.sample_rate_hz}")
        object.__setattr__(self, 'samples', samples)
        object.__setattr__(self, 'sample_rate_hz', int(self.sample_rate_hz))

    def __len__(self) -> int:
        return int(self.samples.shape[0])

    @property
    def duration_s(self) -> float:
        """Duration in seconds."""
        return len(self) / self.sample_rate_hz

    @property
    def energy(self) -> float:
        """Sum of squared samples."""
        return float(np.dot(self.samples, self.samples))

    def with_samples(self, samples) -> 'SampleBuffer':
        """Return a new buffer with the same sample rate."""
        return SampleBuffer(samples=samples, sample_rate_hz=self.sample_rate_hz)
