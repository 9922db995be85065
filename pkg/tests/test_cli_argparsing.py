"""Tests for CLI argument parsing, focused on global-option handling.

Global options (``--config``, ``--output-format``, ``--log-level`` and
``--verbose``) work before or after the subcommand through a shared parent
parser with ``SUPPRESS`` defaults applied post-parse.
"""
import argparse

import pytest

from mspp_enhance.cli.cli_setup import (
    GLOBAL_DEFAULTS,
    _apply_global_defaults,
    build_parser,
    parse_arguments,
    validate_modes,
    validate_noise_kinds,
    validate_rho,
    validate_snr_list,
)


def _parse(argv):
    """Parse argv and apply global defaults, mirroring parse_arguments()."""
    args = build_parser().parse_args(argv)
    _apply_global_defaults(args)
    return args


COMMANDS = {
    'enhance': ['enhance', 'in.wav', 'out.wav'],
    'mix': ['mix', 'clean.wav', 'noise.wav', 'out.wav', '--snr', '0'],
    'eval': ['eval', 'clean.wav', 'noisy.wav', 'enhanced.wav'],
    'batch': ['batch', 'batch.yaml'],
    'synth': ['synth', 'corpus'],
    'spectrogram': ['spectrogram', 'in.wav', 'out.csv'],
    'generate-schema': ['generate-schema'],
}


@pytest.mark.cli
class TestGlobalDefaults:
    """Post-parse defaults are applied when a flag is omitted."""

    def test_defaults_applied_when_absent(self):
        args = _parse(COMMANDS['enhance'])
        assert args.output_format == 'text'
        assert args.config is None
        assert args.log_level is None
        assert args.verbose is False

    def test_all_global_dests_present_after_defaults(self):
        args = _parse(COMMANDS['batch'])
        for dest in GLOBAL_DEFAULTS:
            assert hasattr(args, dest), f"missing global dest: {dest}"


@pytest.mark.cli
class TestGlobalOptionPosition:
    """Global options work before and after each subcommand."""

    @pytest.mark.parametrize("cmd", list(COMMANDS))
    def test_after_subcommand(self, cmd):
        args = _parse(COMMANDS[cmd] + ['--output-format', 'json'])
        assert args.command == cmd
        assert args.output_format == 'json'

    @pytest.mark.parametrize("cmd", list(COMMANDS))
    def test_before_subcommand(self, cmd):
        args = _parse(['--output-format', 'json'] + COMMANDS[cmd])
        assert args.command == cmd
        assert args.output_format == 'json'

    def test_value_before_subcommand_not_clobbered(self):
        args = _parse(['--log-level', 'DEBUG', '-v'] + COMMANDS['eval'])
        assert args.log_level == 'DEBUG'
        assert args.verbose is True

    def test_config_after_subcommand(self):
        args = _parse(COMMANDS['synth'] + ['-c', 'mine.yaml'])
        assert args.config == 'mine.yaml'

    def test_invalid_log_level(self):
        with pytest.raises(SystemExit):
            _parse(COMMANDS['enhance'] + ['--log-level', 'LOUD'])


@pytest.mark.cli
class TestSubcommands:
    """Test subcommand-specific arguments."""

    def test_enhance_defaults(self):
        args = _parse(COMMANDS['enhance'])
        assert args.mode == 'mspp'
        assert args.rho is None
        assert args.clean is None
        assert args.report is None

    @pytest.mark.parametrize("mode", ['mspp', 'm-only', 'p-only', 'ss-baseline'])
    def test_enhance_modes(self, mode):
        assert _parse(COMMANDS['enhance'] + ['--mode', mode]).mode == mode

    def test_enhance_unknown_mode(self):
        with pytest.raises(SystemExit):
            _parse(COMMANDS['enhance'] + ['--mode', 'wiener'])

    def test_enhance_rho(self):
        assert _parse(COMMANDS['enhance'] + ['--rho', '0.5']).rho == 0.5

    def test_mix_requires_snr(self):
        with pytest.raises(SystemExit):
            _parse(['mix', 'clean.wav', 'noise.wav', 'out.wav'])

    def test_mix_negative_snr(self):
        args = _parse(['mix', 'clean.wav', 'noise.wav', 'out.wav', '--snr', '-10', '--seed', '3'])
        assert args.snr == -10.0
        assert args.seed == 3

    def test_eval_frame_len(self):
        assert _parse(COMMANDS['eval'] + ['--frame-len', '256']).frame_len == 256

    def test_eval_frame_len_must_be_positive(self):
        with pytest.raises(SystemExit):
            _parse(COMMANDS['eval'] + ['--frame-len', '0'])

    def test_batch_overrides(self):
        args = _parse(COMMANDS['batch'] + ['--workers', '3', '--output-dir', 'out'])
        assert args.workers == 3
        assert args.output_dir == 'out'

    def test_synth_defaults(self):
        args = _parse(COMMANDS['synth'])
        assert args.count == 10
        assert args.duration == 3.0
        assert args.seed == 0
        assert args.noise == ['white']
        assert args.snr is None
        assert args.mode == ['mspp']

    def test_synth_lists(self):
        args = _parse(COMMANDS['synth'] + ['--noise', 'white,babble', '--snr=-5,0', '-m', 'mspp,ss-baseline'])
        assert args.noise == ['white', 'babble']
        assert args.snr == [-5.0, 0.0]
        assert args.mode == ['mspp', 'ss-baseline']

    def test_spectrogram_options(self):
        args = _parse(COMMANDS['spectrogram'] + ['--format', 'pgm', '--step', 'm'])
        assert args.spectrogram_format == 'pgm'
        assert args.step == 'm'

    def test_schema_report_type(self):
        assert _parse(['generate-schema', 'eval-report']).report_type == 'eval-report'

    def test_no_command_exits_with_usage(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            parse_arguments([])
        assert exc_info.value.code == 2


@pytest.mark.unit
class TestValidators:
    """Test argparse type callables."""

    @pytest.mark.parametrize("value", ['0', '1', '0.25'])
    def test_rho_valid(self, value):
        assert validate_rho(value) == float(value)

    @pytest.mark.parametrize("value", ['-0.1', '1.5', 'x'])
    def test_rho_invalid(self, value):
        with pytest.raises(argparse.ArgumentTypeError):
            validate_rho(value)

    def test_snr_list(self):
        assert validate_snr_list('-10, 0,10') == [-10.0, 0.0, 10.0]

    @pytest.mark.parametrize("value", ['nan', 'inf', '0,abc'])
    def test_snr_list_invalid(self, value):
        with pytest.raises(argparse.ArgumentTypeError):
            validate_snr_list(value)

    def test_noise_kinds_invalid(self):
        with pytest.raises(argparse.ArgumentTypeError, match="pink"):
            validate_noise_kinds('white,pink')

    def test_modes_invalid(self):
        with pytest.raises(argparse.ArgumentTypeError, match="wiener"):
            validate_modes('wiener')
