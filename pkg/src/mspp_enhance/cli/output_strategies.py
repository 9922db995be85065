"""Output strategies for different display formats."""
import json
from abc import ABC, abstractmethod
from typing import Any, Dict

from mspp_enhance.cli.formatters import (
    build_batch_table,
    build_diagnostics_table,
    build_eval_table,
    build_manifest_table,
)
from mspp_enhance.utils.constants import Style


class OutputStrategy(ABC):
    """Abstract base class for output strategies."""

    @abstractmethod
    def output(self, data: Dict[str, Any], context) -> None:
        """Output a handler result in a specific format.

        Args:
            data: Result dict with 'command' and 'payload'
            context: CLI context
        """


class TextOutputStrategy(OutputStrategy):
    """Strategy for Rich table output."""

    def output(self, data: Dict[str, Any], context) -> None:
        command = data['command']
        payload = data['payload']
        console = context.console

        if command in ('enhance', 'mix'):
            console.print(build_manifest_table(payload))
            if payload.get('diagnostics'):
                console.print(build_diagnostics_table(payload['diagnostics']))
            if payload.get('metrics'):
                console.print(build_eval_table(payload['metrics']))
            timings = data.get('timings')
            if timings and context.verbose:
                console.print(f"[{Style.DIM}]Completed in {timings.get('total', 0.0):.2f}s[/{Style.DIM}]")
        elif command == 'eval':
            console.print(build_eval_table(payload))
        elif command == 'batch':
            console.print(build_batch_table(data['summary']))
            console.print(f"{payload['rows']} result rows written to {payload['results_csv']}")
            console.print(f"Summary written to [{Style.GREEN}]{payload['summary_csv']}[/{Style.GREEN}]")
        elif command == 'synth':
            console.print(f"[{Style.BOLD}]Corpus written to {payload['output_dir']}[/{Style.BOLD}]")
            console.print(f"Run it with: mspp batch {payload['manifest']}")
        elif command == 'spectrogram':
            console.print(f"Spectrogram ({payload['format']}) written to {payload['output']}")
        # generate-schema prints its own paths


class JsonOutputStrategy(OutputStrategy):
    """Strategy for machine-readable JSON on stdout."""

    def output(self, data: Dict[str, Any], context) -> None:
        print(json.dumps(data['payload'], indent=2, sort_keys=True))


def get_output_strategy(output_format: str) -> OutputStrategy:
    """Return the strategy for --output-format."""
    if output_format == 'json':
        return JsonOutputStrategy()
    return TextOutputStrategy()
