"""Shared constants for the mspp application.

Constants used across CLI, pipeline and utils modules.
"""
from enum import Enum

from mspp_enhance.utils.exceptions import (
    AudioIOError,
    ConfigurationError,
    ContractViolationError,
    ReportGenerationError,
)


DEFAULT_SAMPLE_RATE_HZ = 8000
DEFAULT_SEGSNR_FRAME_LEN = 160
DEFAULT_LOG_FILE = 'logs/mspp.log'
DEFAULT_LOG_LEVEL = 'INFO'
VALID_LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')

# Environment overrides (optionally loaded from a .env file)
ENV_CONFIG_PATH = 'MSPP_CONFIG'
ENV_LOG_LEVEL = 'MSPP_LOG_LEVEL'


class ExitCode:  # pylint: disable=too-few-public-methods
    """Process exit codes."""
    SUCCESS = 0
    FAILURE = 1
    USAGE = 2
    IO = 3
    CONTRACT = 4
    INTERRUPTED = 130


# Most specific class first; lookup walks this in order.
EXIT_CODES = (
    (ConfigurationError, ExitCode.USAGE),
    (AudioIOError, ExitCode.IO),
    (ReportGenerationError, ExitCode.IO),
    (ContractViolationError, ExitCode.CONTRACT),
)


def exit_code_for(error: Exception) -> int:
    """Return the exit code for an exception instance."""
    for error_type, code in EXIT_CODES:
        if isinstance(error, error_type):
            return code
    return ExitCode.FAILURE


# Rich styles (used by CLI formatters)
class Style:  # pylint: disable=too-few-public-methods
    """Rich markup style constants."""
    GREEN = "green"
    RED = "red"
    YELLOW = "yellow"
    DIM = "dim"
    CYAN = "cyan"
    BOLD = "bold"


class EnhanceMode(Enum):
    """Enhancement modes exposed by `mspp enhance --mode`."""
    MSPP = "mspp"
    M_ONLY = "m-only"
    P_ONLY = "p-only"
    SS_BASELINE = "ss-baseline"


class SpectrogramFormat(Enum):
    """Spectrogram export formats."""
    CSV = "csv"
    PGM = "pgm"


class NoiseKind(Enum):
    """Synthetic noise kinds produced by audio.synthesis.synth_noise."""
    WHITE = "white"
    STREET = "street"
    BABBLE = "babble"


# SNR sweep used by `mspp synth` when writing a batch manifest.
DEFAULT_SNR_SWEEP_DB = (-30, -25, -20, -15, -10, -5, 0, 5, 10)
