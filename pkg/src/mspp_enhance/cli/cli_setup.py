"""CLI setup and initialization functions."""
import argparse
import math
import os
from typing import List, Optional, Tuple

from dotenv import find_dotenv, load_dotenv
from rich.console import Console

from mspp_enhance import __version__, __author__, __license__
from mspp_enhance.cli.context import CliContext
from mspp_enhance.cli.schema import SCHEMA_GENERATORS
from mspp_enhance.enhancement.engine import ENHANCEMENT_MODES
from mspp_enhance.utils.config import read_config_from_yaml
from mspp_enhance.utils.constants import (
    ENV_CONFIG_PATH,
    EnhanceMode,
    NoiseKind,
    SpectrogramFormat,
    VALID_LOG_LEVELS,
)
from mspp_enhance.utils.exceptions import ConfigurationError
from mspp_enhance.utils.logger import setup_logging


def validate_snr(value: str) -> float:
    """Validate a single SNR value in dB.

    Raises:
        argparse.ArgumentTypeError: If the value is not a finite number
    """
    try:
        snr = float(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Invalid SNR value: {value}") from e
    if not math.isfinite(snr):
        raise argparse.ArgumentTypeError(f"SNR must be finite, got {value}")
    return snr


def validate_snr_list(value: str) -> List[float]:
    """Validate a comma-separated list of SNR values, e.g. '-10,0,10'."""
    return [validate_snr(v.strip()) for v in value.split(',') if v.strip()]


def validate_rho(value: str) -> float:
    """Validate a constant rho in [0, 1]."""
    try:
        rho = float(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Invalid rho value: {value}") from e
    if not 0.0 <= rho <= 1.0:
        raise argparse.ArgumentTypeError(f"rho must lie in [0, 1], got {value}")
    return rho


def validate_noise_kinds(value: str) -> List[str]:
    """Validate a comma-separated list of noise kinds."""
    valid = [k.value for k in NoiseKind]
    kinds = [k.strip() for k in value.split(',') if k.strip()]
    invalid = [k for k in kinds if k not in valid]
    if invalid or not kinds:
        raise argparse.ArgumentTypeError(
            f"Invalid noise kind(s): {', '.join(invalid) or value}. Valid kinds are: {', '.join(valid)}"
        )
    return kinds


def validate_modes(value: str) -> List[str]:
    """Validate a comma-separated list of enhancement modes."""
    modes = [m.strip() for m in value.split(',') if m.strip()]
    invalid = [m for m in modes if m not in ENHANCEMENT_MODES]
    if invalid or not modes:
        raise argparse.ArgumentTypeError(
            f"Invalid mode(s): {', '.join(invalid) or value}. Valid modes are: {', '.join(ENHANCEMENT_MODES)}"
        )
    return modes


def positive_int(value: str) -> int:
    """argparse type for integers >= 1."""
    try:
        number = int(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Expected an integer, got {value}") from e
    if number < 1:
        raise argparse.ArgumentTypeError(f"Expected a positive integer, got {value}")
    return number


# Global options use SUPPRESS so a subparser's unspecified copy never
# overwrites a value given before the subcommand; these are applied post-parse.
GLOBAL_DEFAULTS = {
    'config': None,
    'output_format': 'text',
    'log_level': None,
    'verbose': False,
}


def _build_global_parser() -> argparse.ArgumentParser:
    """Build the shared parent parser holding all global options.

    Returns:
        A parser configured with ``add_help=False`` for use as a ``parents``
        entry on both the main parser and each subparser.
    """
    global_parser = argparse.ArgumentParser(add_help=False)

    global_parser.add_argument(
        "-c", "--config",
        default=argparse.SUPPRESS,
        help=f"Path to configuration YAML file. If omitted, uses ${ENV_CONFIG_PATH}, then searches "
             "./mspp.yaml and config/config.yaml; built-in defaults apply when none is found"
    )
    global_parser.add_argument(
        "--output-format",
        choices=['text', 'json'],
        default=argparse.SUPPRESS,
        help="Output format (default: text)"
    )
    global_parser.add_argument(
        "--log-level",
        choices=list(VALID_LOG_LEVELS),
        default=argparse.SUPPRESS,
        help="Log level (overrides MSPP_LOG_LEVEL and the config file)"
    )
    global_parser.add_argument(
        "-v", "--verbose",
        action="store_true",
        default=argparse.SUPPRESS,
        help="Enable verbose output"
    )

    return global_parser


def _apply_global_defaults(args: argparse.Namespace) -> None:
    """Fill in defaults for any global option the user did not supply."""
    for dest, default in GLOBAL_DEFAULTS.items():
        if not hasattr(args, dest):
            setattr(args, dest, default)


def build_parser() -> argparse.ArgumentParser:
    """Build and return the CLI argument parser.

    Global options (``--config``, ``--output-format``, ``--log-level``,
    ``--verbose``) may be given before or after the subcommand.

    Returns:
        The configured ArgumentParser.
    """
    global_parser = _build_global_parser()

    parser = argparse.ArgumentParser(
        prog='mspp',
        description="Speech enhancement by magnitude and phase spectrum compensation",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[global_parser]
    )
    parser.add_argument(
        '--version',
        action='version',
        version=f'%(prog)s {__version__}\nAuthor: {__author__}\nLicense: {__license__}'
    )

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    # Subcommand: enhance
    enhance_parser = subparsers.add_parser(
        'enhance',
        help='Enhance a noisy WAV file',
        description='Run the magnitude step, then the phase step (or a single baseline mode) on a 16-bit mono WAV',
        parents=[global_parser]
    )
    enhance_parser.add_argument('input', help='Noisy input WAV')
    enhance_parser.add_argument('output', help='Enhanced output WAV')
    enhance_parser.add_argument(
        '-m', '--mode',
        choices=list(ENHANCEMENT_MODES),
        default=EnhanceMode.MSPP.value,
        help='Enhancement mode (default: mspp)'
    )
    enhance_parser.add_argument(
        '--rho',
        type=validate_rho,
        help='Use a constant rho in [0, 1] for the phase step instead of the presence probabilities'
    )
    enhance_parser.add_argument(
        '--clean',
        help='Clean reference WAV; adds improvement metrics to the output and report'
    )
    enhance_parser.add_argument('--report', help='Write the run manifest (JSON) to this path')

    # Subcommand: mix
    mix_parser = subparsers.add_parser(
        'mix',
        help='Mix noise into clean speech at a target SNR',
        description='Scale a noise WAV so the mixture has the requested SNR against the clean WAV',
        parents=[global_parser]
    )
    mix_parser.add_argument('clean', help='Clean speech WAV')
    mix_parser.add_argument('noise', help='Noise WAV (at least as long as the clean file)')
    mix_parser.add_argument('output', help='Noisy output WAV')
    mix_parser.add_argument('--snr', type=validate_snr, required=True, help='Target SNR in dB')
    mix_parser.add_argument('--seed', type=int, help='Seed for the noise segment offset (default: start of file)')
    mix_parser.add_argument('--report', help='Write the run manifest (JSON) to this path')

    # Subcommand: eval
    eval_parser = subparsers.add_parser(
        'eval',
        help='Compute SegSNR and overall SNR improvement',
        description='Compare an enhanced WAV and its noisy input against the clean reference',
        parents=[global_parser]
    )
    eval_parser.add_argument('clean', help='Clean reference WAV')
    eval_parser.add_argument('noisy', help='Noisy input WAV')
    eval_parser.add_argument('enhanced', help='Enhanced WAV')
    eval_parser.add_argument('--report', help='Write the evaluation report (JSON) to this path')
    eval_parser.add_argument(
        '--frame-len',
        type=positive_int,
        help='SegSNR frame length in samples (overrides metrics.segsnr_frame_len, default: 160)'
    )

    # Subcommand: batch
    batch_parser = subparsers.add_parser(
        'batch',
        help='Run a mix -> enhance -> eval grid from a YAML manifest',
        description='Writes noisy and enhanced WAVs, results.csv and summary.csv '
                    '(rows = SNR, columns = mode, values = SegSNR improvement)',
        parents=[global_parser]
    )
    batch_parser.add_argument('manifest', help='Batch manifest YAML')
    batch_parser.add_argument('--workers', type=positive_int, help='Parallel grid cells (overrides batch.workers)')
    batch_parser.add_argument('--output-dir', help='Override the manifest output_dir')
    batch_parser.add_argument('--rho', type=validate_rho, help='Constant rho for modes with a phase step')

    # Subcommand: synth
    synth_parser = subparsers.add_parser(
        'synth',
        help='Write a reproducible synthetic corpus and batch manifest',
        description='Generates speech-like clean files, noise files and a ready-to-run batch.yaml',
        parents=[global_parser]
    )
    synth_parser.add_argument('output_dir', help='Corpus directory')
    synth_parser.add_argument('--count', type=positive_int, default=10, help='Number of clean files (default: 10)')
    synth_parser.add_argument('--duration', type=float, default=3.0, help='Clean file duration in seconds (default: 3.0)')
    synth_parser.add_argument('--seed', type=int, default=0, help='Base seed (default: 0)')
    synth_parser.add_argument(
        '--noise',
        type=validate_noise_kinds,
        default=[NoiseKind.WHITE.value],
        help="Comma-separated noise kinds: white, street, babble (default: white)"
    )
    synth_parser.add_argument(
        '--snr',
        type=validate_snr_list,
        help='Comma-separated SNR levels for the manifest (default: -30 to 10 in 5 dB steps)'
    )
    synth_parser.add_argument(
        '-m', '--mode',
        type=validate_modes,
        default=[EnhanceMode.MSPP.value],
        help='Comma-separated modes for the manifest (default: mspp)'
    )

    # Subcommand: spectrogram
    spectrogram_parser = subparsers.add_parser(
        'spectrogram',
        help='Export a dB magnitude spectrogram',
        description='Write a spectrogram as CSV (one row per frame) or as a binary PGM image',
        parents=[global_parser]
    )
    spectrogram_parser.add_argument('input', help='Input WAV')
    spectrogram_parser.add_argument('output', help='Output CSV or PGM file')
    spectrogram_parser.add_argument(
        '-f', '--format',
        dest='spectrogram_format',
        choices=[f.value for f in SpectrogramFormat],
        help='Output format (default: from the output suffix, else csv)'
    )
    spectrogram_parser.add_argument(
        '--step',
        choices=['m', 'p'],
        default='p',
        help='Use the framing of the magnitude (m) or phase (p) step (default: p)'
    )

    # Subcommand: generate-schema
    schema_parser = subparsers.add_parser(
        'generate-schema',
        help='Generate JSON schema for manifests and reports',
        description='Generate JSON schema(s). If no report type is specified, generates all schemas to ./output/schemas/',
        parents=[global_parser]
    )
    schema_parser.add_argument(
        'report_type',
        nargs='?',
        choices=list(SCHEMA_GENERATORS),
        help='Report type to generate schema for (default: generate all)'
    )
    schema_parser.add_argument(
        '--schema-output',
        help='Path to write JSON schema file or directory (default: ./output/schemas/)'
    )

    return parser


def _resolve_config_path(explicit: Optional[str]) -> Tuple[Optional[str], bool]:
    """Resolve the config file path.

    Returns:
        Tuple of (path or None, whether the file must exist)
    """
    if explicit is not None:
        return explicit, True
    from_env = os.environ.get(ENV_CONFIG_PATH)
    if from_env:
        return from_env, True
    for candidate in ("mspp.yaml", "config/config.yaml"):
        if os.path.isfile(candidate):
            return candidate, False
    return None, False


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments.

    Returns:
        Parsed arguments namespace
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_global_defaults(args)
    if args.command is None:
        parser.print_help()
        parser.exit(2)
    return args


def load_configuration(args, ctx) -> dict:
    """Load configuration with precedence CLI > environment > YAML > defaults.

    Args:
        args: Parsed command line arguments
        ctx: CLI context

    Returns:
        Configuration dictionary

    Raises:
        ConfigurationError: If configuration is invalid
    """
    # Load environment variables from a .env file in or above the working directory
    load_dotenv(find_dotenv(usecwd=True))
    config_path, required = _resolve_config_path(args.config)
    ctx.log_verbose(f"Loading configuration from {config_path or 'built-in defaults'}")
    config = read_config_from_yaml(config_path, required=required)
    if args.log_level:
        config['logging']['level'] = args.log_level
    try:
        setup_logging(config, worker_name="mspp")
    except OSError as e:
        raise ConfigurationError(f"Cannot open log file {config['logging']['file']}: {e}") from e
    return config


def setup_environment(args) -> CliContext:
    """Create the CLI context and load configuration.

    Args:
        args: Parsed command line arguments

    Returns:
        CliContext with config attached
    """
    ctx = CliContext(
        console=Console(),
        verbose=args.verbose,
        json_output_mode=(args.output_format == 'json')
    )
    ctx.config = load_configuration(args, ctx)
    return ctx
