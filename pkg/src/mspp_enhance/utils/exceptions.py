"""Custom exceptions for mspp_enhance.

Business logic exceptions shared between the library and the CLI. The CLI
maps each class onto a process exit code (see utils.constants.EXIT_CODES).
"""


class EnhancementError(Exception):
    """Base exception for all mspp_enhance errors.

    All custom exceptions in the project should inherit from this base class.
    """


class ConfigurationError(EnhancementError):
    """Configuration file or settings error.

    Raised when:
    - YAML parsing fails
    - A parameter has the wrong type or is out of its valid range
    - A batch manifest is missing required keys
    """


class AudioIOError(EnhancementError):
    """Audio file read or write error.

    Raised when:
    - Input WAV file is missing or unreadable
    - WAV header is malformed
    - Encoding is not 16-bit PCM or channel count is not 1
    - Output WAV cannot be written
    """


class ReportGenerationError(EnhancementError):
    """Error writing a report, manifest, CSV or PGM file."""


class ContractViolationError(EnhancementError):
    """Numeric or contract violation.

    Raised when:
    - A buffer holds NaN/Inf samples or a non-positive sample rate
    - Framing or DFT preconditions fail
    - A probability or rho leaves [0, 1]
    - An invariant checked at run time does not hold
    """


class InsufficientSignalError(ContractViolationError):
    """Input is too short for the requested processing step."""


class EvaluationError(ContractViolationError):
    """Metric preconditions fail (length mismatch, silent reference)."""


__all__ = [
    'EnhancementError',
    'ConfigurationError',
    'AudioIOError',
    'ReportGenerationError',
    'ContractViolationError',
    'InsufficientSignalError',
    'EvaluationError',
]
