"""
Constants for the two enhancement steps.
"""

# Phase compensation constants; thresholds in dB.
MU = 0.6
XI_MIN_DB = -10.0
XI_MAX_DB = -5.0
XI_PEAK_DB = 10.0
W_LOCAL = 1
W_GLOBAL = 15
ALPHA_XI = 0.7

# M-step noise tracker
NOISE_BETA = 0.7
VAD_THRESHOLD_DB = 3.0
INIT_FRAME_COUNT = 6

# Floor for |Y|^2, V^2 and energy denominators.
EPSILON = 1e-12

# Frame SNR changes within this relative margin do not count as rising.
RISING_TOLERANCE = 1e-9


def db_to_ratio(value_db: float) -> float:
    """Convert a power ratio in dB to linear."""
    return 10.0 ** (value_db / 10.0)
