"""CLI module for the mspp tool."""

from mspp_enhance.cli.cli_setup import parse_arguments, setup_environment
from mspp_enhance.cli.context import CliContext
from mspp_enhance.cli.operations import COMMAND_HANDLERS
from mspp_enhance.cli.output_strategies import get_output_strategy
from mspp_enhance.cli.schema import handle_schema_generation

__all__ = [
    'parse_arguments',
    'setup_environment',
    'CliContext',
    'COMMAND_HANDLERS',
    'get_output_strategy',
    'handle_schema_generation'
]
