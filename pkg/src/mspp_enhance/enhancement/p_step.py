"""
Phase compensation weighted by speech-presence probability.

Each frame of the intermediate signal gets a real, anti-symmetric offset
phi = mu * rho * Lambda * V added before its angle is taken. Conjugate
pairs then partially cancel at resynthesis, and they cancel more where the
bin energy is small next to V. rho shrinks towards zero as the local,
global and frame-level speech presence probabilities grow.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.signal import windows

from mspp_enhance.dsp.stft import analyze, hermitian_part, imaginary_residue_ratio, synthesize
from mspp_enhance.enhancement.constants import EPSILON, RISING_TOLERANCE
from mspp_enhance.enhancement.diagnostics import StepDiagnostics
from mspp_enhance.enhancement.params import EnhancementParams
from mspp_enhance.utils.exceptions import ContractViolationError, InsufficientSignalError
from mspp_enhance.utils.models import SampleBuffer


logger = logging.getLogger(__name__)

PROBABILISTIC = "probabilistic"
CONSTANT = "constant"


@dataclass(frozen=True)
class CompensationMode:
    """How rho is obtained: from presence probabilities, or fixed per bin."""
    kind: str = PROBABILISTIC
    constant_rho: float = 1.0

    def __post_init__(self):
        if self.kind not in (PROBABILISTIC, CONSTANT):
            raise ContractViolationError(f"Unknown compensation mode: {self.kind!r}")
        if self.kind == CONSTANT and not 0.0 <= self.constant_rho <= 1.0:
            raise ContractViolationError(f"Constant rho must lie in [0, 1], got {self.constant_rho}")

    @classmethod
    def probabilistic(cls) -> 'CompensationMode':
        return cls(PROBABILISTIC)

    @classmethod
    def constant(cls, value: float) -> 'CompensationMode':
        return cls(CONSTANT, float(value))

    @property
    def is_constant(self) -> bool:
        return self.kind == CONSTANT

    def to_dict(self) -> dict:
        if self.is_constant:
            return {'kind': self.kind, 'constant_rho': self.constant_rho}
        return {'kind': self.kind}


@dataclass(frozen=True)
class SppState:
    """Cross-frame memory: the previous frame's mean a priori SNR."""
    prev_xi_frame: float

    def __post_init__(self):
        if not self.prev_xi_frame >= 0.0:
            raise ContractViolationError(f"prev_xi_frame must be >= 0, got {self.prev_xi_frame}")

    @classmethod
    def initial(cls, params: EnhancementParams) -> 'SppState':
        return cls(prev_xi_frame=params.xi_min)


@dataclass(frozen=True)
class PhaseCompFrame:
    """Every intermediate quantity of one compensated frame.

    Probability fields are None in constant-rho mode.
    """
    v: float
    gamma: np.ndarray
    xi: np.ndarray
    xi_local: Optional[np.ndarray]
    xi_global: Optional[np.ndarray]
    p_local: Optional[np.ndarray]
    p_global: Optional[np.ndarray]
    p_frame: Optional[float]
    rho: np.ndarray
    lambda_: np.ndarray
    phi: np.ndarray


def noise_proxy_v(z_frame: np.ndarray) -> float:
    """Frame RMS of the intermediate spectrum, sqrt(mean |Z[k]|^2)."""
    z_frame = np.asarray(z_frame)
    if z_frame.size == 0:
        raise ContractViolationError("noise_proxy_v needs a non-empty frame")
    return float(np.sqrt(np.mean(np.abs(z_frame) ** 2)))


def posterior_snr(z_frame: np.ndarray, v: float) -> np.ndarray:
    """A posteriori SNR per bin, |Z[k]|^2 / max(V^2, eps)."""
    return np.abs(np.asarray(z_frame)) ** 2 / max(v * v, EPSILON)


def a_priori_xi(gamma: np.ndarray, alpha_xi: float) -> np.ndarray:
    """xi[k] = (1 - alpha_xi) * gamma[k]."""
    return (1.0 - alpha_xi) * np.asarray(gamma, dtype=np.float64)


def smoothing_window(w: int) -> np.ndarray:
    """Hann-shaped window of length 2w + 1, normalised to sum 1 (w=1 gives [.25, .5, .25])."""
    if w < 0:
        raise ContractViolationError(f"Smoothing half-width must be >= 0, got {w}")
    if w == 0:
        return np.ones(1)
    h = windows.hann(2 * w + 3, sym=True)[1:-1]
    return h / h.sum()


def smooth_xi(xi: np.ndarray, w: int) -> np.ndarray:
    """Smooth xi across frequency with a 2w+1 tap window; bins outside the frame count as 0."""
    xi = np.asarray(xi, dtype=np.float64)
    h = smoothing_window(int(w))
    if h.size == 1:
        return xi.copy()
    if h.size > xi.size:
        padded = np.convolve(np.pad(xi, h.size), h, mode='same')
        return padded[h.size:h.size + xi.size]
    return np.convolve(xi, h, mode='same')


def mirrored_smooth_xi(xi: np.ndarray, w: int) -> np.ndarray:
    """smooth_xi on bins 0..N/2, mirrored onto the upper half so the result is symmetric."""
    smoothed = smooth_xi(xi, w)
    n = smoothed.size
    k = np.arange(n)
    return smoothed[np.minimum(k, (n - k) % n)]


def presence_prob(xi_psi, xi_min: float, xi_max: float):
    """Speech presence probability from smoothed xi.

    0 for xi_psi <= xi_min, 1 for xi_psi >= xi_max, and
    log(xi_psi / xi_min) / log(xi_max / xi_min) in between.
    """
    if not 0.0 < xi_min < xi_max:
        raise ContractViolationError(f"Need 0 < xi_min < xi_max, got {xi_min}, {xi_max}")
    values = np.asarray(xi_psi, dtype=np.float64)
    ratio = np.log(np.maximum(values, xi_min) / xi_min) / math.log(xi_max / xi_min)
    prob = np.where(values <= xi_min, 0.0, np.where(values >= xi_max, 1.0, ratio))
    prob = np.where(np.isnan(values), np.nan, prob)
    return float(prob) if prob.ndim == 0 else prob


def mu_tau(xi_frame: float, params: EnhancementParams) -> float:
    """Frame-level soft decision, the log interpolation between xi_peak*xi_min and xi_peak*xi_max, clamped to [0, 1]."""
    low = params.xi_peak * params.xi_min
    high = params.xi_peak * params.xi_max
    if xi_frame <= low:
        return 0.0
    if xi_frame >= high:
        return 1.0
    return math.log(xi_frame / low) / math.log(params.xi_max / params.xi_min)


def frame_presence(xi: np.ndarray, state: SppState, params: EnhancementParams) -> Tuple[float, SppState]:
    """Frame speech presence probability and the updated state.

    0 when mean xi is below xi_min, 1 when it is above xi_min and rising
    against the previous frame (beyond rounding), mu_tau otherwise.
    """
    xi_frame = float(np.mean(xi))
    if xi_frame < params.xi_min:
        p_frame = 0.0
    elif xi_frame > state.prev_xi_frame * (1.0 + RISING_TOLERANCE) and xi_frame > params.xi_min:
        p_frame = 1.0
    else:
        p_frame = mu_tau(xi_frame, params)
    return p_frame, SppState(prev_xi_frame=xi_frame)


def rho(p_local, p_global, p_frame):
    """Compensation strength sqrt(1 - P_local * P_global * P_frame)."""
    product = np.asarray(p_local, dtype=np.float64) * np.asarray(p_global, dtype=np.float64) * p_frame
    result = np.sqrt(1.0 - np.clip(product, 0.0, 1.0))
    result = np.where(np.isnan(product), np.nan, result)
    return float(result) if result.ndim == 0 else result


def lambda_weights(n: int) -> np.ndarray:
    """Anti-symmetric weights: 0 at DC and Nyquist, +1 below Nyquist, -1 above."""
    if n < 2:
        raise ContractViolationError(f"lambda_weights needs n >= 2, got {n}")
    k = np.arange(n)
    weights = np.where(k < n / 2.0, 1.0, -1.0)
    weights[0] = 0.0
    if n % 2 == 0:
        weights[n // 2] = 0.0
    return weights


def phase_comp_function(mu: float, rho_values, lambda_values, v: float) -> np.ndarray:
    """phi[k] = mu * rho[k] * Lambda[k] * V."""
    return mu * np.asarray(rho_values, dtype=np.float64) * np.asarray(lambda_values, dtype=np.float64) * v


def apply_phase_compensation(z_frame: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """X[k] = |Z[k]| * exp(j * angle(Z[k] + phi[k])), with X[k] = 0 where Z[k] + phi[k] = 0.

    Raises:
        ContractViolationError: If lengths differ
    """
    z_frame = np.asarray(z_frame, dtype=np.complex128)
    phi = np.asarray(phi, dtype=np.float64)
    if z_frame.shape != phi.shape:
        raise ContractViolationError(f"Frame length {z_frame.shape} does not match phi length {phi.shape}")
    shifted = z_frame + phi
    magnitude = np.abs(z_frame)
    return np.where(shifted == 0, 0.0, magnitude * np.exp(1j * np.angle(shifted)))


def _check_unit_interval(name: str, values) -> Tuple[float, float]:
    values = np.atleast_1d(np.asarray(values, dtype=np.float64))
    if np.any(np.isnan(values)) or np.any(values < 0.0) or np.any(values > 1.0):
        raise ContractViolationError(f"{name} left [0, 1]: min={np.nanmin(values)}, max={np.nanmax(values)}")
    return float(values.min()), float(values.max())


def compensation_frame(z_frame: np.ndarray, state: SppState, params: EnhancementParams,
                       mode: CompensationMode) -> Tuple[PhaseCompFrame, SppState]:
    """Compute V, xi, the probabilities, rho and phi for one frame.

    Raises:
        ContractViolationError: If a probability or rho leaves [0, 1]
    """
    n = z_frame.shape[-1]
    v = noise_proxy_v(z_frame)
    gamma = posterior_snr(z_frame, v)
    xi = a_priori_xi(gamma, params.alpha_xi)
    lambda_ = lambda_weights(n)

    if mode.is_constant:
        rho_values = np.full(n, mode.constant_rho)
        xi_local = xi_global = p_local = p_global = None
        p_frame = None
    else:
        xi_local = mirrored_smooth_xi(xi, params.w_local)
        xi_global = mirrored_smooth_xi(xi, params.w_global)
        p_local = presence_prob(xi_local, params.xi_min, params.xi_max)
        p_global = presence_prob(xi_global, params.xi_min, params.xi_max)
        p_frame, state = frame_presence(xi, state, params)
        for name, values in (('P_local', p_local), ('P_global', p_global), ('P_frame', p_frame)):
            _check_unit_interval(name, values)
        rho_values = rho(p_local, p_global, p_frame)
    _check_unit_interval('rho', rho_values)

    phi = phase_comp_function(params.mu, rho_values, lambda_, v)
    frame = PhaseCompFrame(v=v, gamma=gamma, xi=xi, xi_local=xi_local, xi_global=xi_global,
                           p_local=p_local, p_global=p_global, p_frame=p_frame,
                           rho=rho_values, lambda_=lambda_, phi=phi)
    return frame, state


def _record(diagnostics: StepDiagnostics, frame: PhaseCompFrame) -> None:
    parts = [frame.rho]
    if frame.p_local is not None:
        parts.extend([frame.p_local, frame.p_global, np.atleast_1d(frame.p_frame)])
    values = np.concatenate(parts)
    diagnostics.record_probabilities(float(values.min()), float(values.max()))
    if diagnostics.keep_frames:
        diagnostics.frame_traces.append(frame)


def run_p_step(intermediate: SampleBuffer, params: Optional[EnhancementParams] = None,
               mode: Optional[CompensationMode] = None,
               diagnostics: Optional[StepDiagnostics] = None) -> SampleBuffer:
    """Full P-step pass turning the intermediate signal into the enhanced signal.

    The compensated spectra are projected onto their conjugate-symmetric part
    before the inverse DFT; that projection is exactly what taking the real
    part of the IDFT keeps.

    Raises:
        InsufficientSignalError: If the input is shorter than one P-step frame
        ContractViolationError: On a probability outside [0, 1]
    """
    params = params or EnhancementParams()
    mode = mode or CompensationMode.probabilistic()
    config = params.p_config
    if len(intermediate) < config.frame_len:
        raise InsufficientSignalError(
            f"Input has {len(intermediate)} samples; the P-step needs at least {config.frame_len}"
        )
    logger.info("P-step: %s samples, frame_len=%s hop=%s, mode=%s", len(intermediate), config.frame_len,
                config.hop, mode.kind)

    sequence, spectra = analyze(intermediate, config)
    state = SppState.initial(params)
    compensated = np.empty_like(spectra)
    for index, z_frame in enumerate(spectra):
        frame, state = compensation_frame(z_frame, state, params, mode)
        compensated[index] = apply_phase_compensation(z_frame, frame.phi)
        if diagnostics is not None:
            _record(diagnostics, frame)
        logger.debug("Frame %s: V=%.4g P_frame=%s", index, frame.v, frame.p_frame)

    projected = hermitian_part(compensated)

    if diagnostics is not None:
        total = float(np.sum(np.abs(compensated) ** 2))
        discarded = float(np.sum(np.abs(compensated - projected) ** 2))
        diagnostics.frames += sequence.frame_count
        diagnostics.max_imag_residue = max(diagnostics.max_imag_residue, imaginary_residue_ratio(projected))
        diagnostics.unprojected_imag_residue = max(diagnostics.unprojected_imag_residue,
                                                   imaginary_residue_ratio(compensated))
        diagnostics.discarded_imag_energy_ratio = discarded / total if total > 0.0 else 0.0

    return synthesize(projected, sequence)
