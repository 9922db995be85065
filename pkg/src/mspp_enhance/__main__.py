#!/usr/bin/env python3
"""
MSPP speech enhancement CLI

Enhances noisy 16-bit mono WAV files, mixes test material at a target SNR,
evaluates SegSNR and overall SNR improvement and runs batch sweeps.
"""

import json
import sys

from rich.console import Console

from mspp_enhance.cli.cli_setup import parse_arguments, setup_environment
from mspp_enhance.cli.context import CliContext
from mspp_enhance.cli.operations import COMMAND_HANDLERS
from mspp_enhance.cli.output_strategies import get_output_strategy
from mspp_enhance.utils.constants import ExitCode, exit_code_for
from mspp_enhance.utils.exceptions import (
    AudioIOError,
    ConfigurationError,
    ContractViolationError,
    EnhancementError,
    ReportGenerationError,
)


ERROR_LABELS = (
    (ConfigurationError, "Configuration Error"),
    (AudioIOError, "Audio I/O Error"),
    (ReportGenerationError, "Report Error"),
    (ContractViolationError, "Contract Violation"),
)


def _error_label(error) -> str:
    for error_type, label in ERROR_LABELS:
        if isinstance(error, error_type):
            return label
    return "Error"


def _handle_error(error, error_type, ctx, exit_code=ExitCode.FAILURE):
    """Handle error reporting for both JSON and console output modes."""
    if ctx.json_output_mode:
        print(json.dumps({"error": error_type, "message": str(error), "exit_code": exit_code}))
    else:
        ctx.console.print(f"[bold red]{error_type}:[/bold red] {error}")
        if ctx.verbose and hasattr(error, '__traceback__'):
            import traceback
            ctx.console.print(traceback.format_exc())
    sys.exit(exit_code)


def _handle_keyboard_interrupt(ctx):
    """Handle KeyboardInterrupt (Ctrl+C) gracefully."""
    if not ctx.json_output_mode:
        ctx.console.print("\n[yellow]Operation cancelled by user[/yellow]")
    sys.exit(ExitCode.INTERRUPTED)


def main(argv=None):
    """Main CLI entry point."""
    args = parse_arguments(argv)

    # Minimal context so configuration errors are reported in the requested format
    ctx = CliContext(
        console=Console(),
        verbose=args.verbose,
        json_output_mode=(args.output_format == 'json')
    )

    try:
        ctx = setup_environment(args)
        result = COMMAND_HANDLERS[args.command](args, ctx)
        get_output_strategy(args.output_format).output(result, ctx)
        return ExitCode.SUCCESS

    except EnhancementError as e:
        _handle_error(e, _error_label(e), ctx, exit_code_for(e))

    except KeyboardInterrupt:
        _handle_keyboard_interrupt(ctx)

    except Exception as e:  # pylint: disable=broad-exception-caught
        _handle_error(e, "Unexpected Error", ctx)


if __name__ == "__main__":
    sys.exit(main())
