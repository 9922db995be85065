"""CLI context: console, output mode and the resolved configuration."""
from dataclasses import dataclass, field
from typing import Any, Dict

from rich.console import Console

from mspp_enhance.enhancement.params import EnhancementParams, params_from_config
from mspp_enhance.pipeline.manifest import ManifestWriter


@dataclass
class CliContext:
    """State shared by every subcommand handler.

    Attributes:
        console: Rich Console for text output
        verbose: Print progress lines in text mode
        json_output_mode: Suppress everything but the final JSON object
        config: Configuration after defaults, YAML, environment and CLI overrides
    """
    console: Console
    verbose: bool = False
    json_output_mode: bool = False
    config: Dict[str, Any] = field(default_factory=dict)

    def log_verbose(self, message: str):
        """Print a dim progress line; silent in JSON mode."""
        if self.verbose and not self.json_output_mode:
            self.console.print(f"[dim]{message}[/dim]")

    @property
    def include_timings(self) -> bool:
        return bool(self.config['manifest']['include_timings'])

    @property
    def segsnr_frame_len(self) -> int:
        return int(self.config['metrics']['segsnr_frame_len'])

    @property
    def batch_workers(self) -> int:
        return int(self.config['batch']['workers'])

    def enhancement_params(self) -> EnhancementParams:
        """EnhancementParams built from the 'enhancement' section."""
        return params_from_config(self.config)

    def manifest_writer(self) -> ManifestWriter:
        return ManifestWriter(include_timings=self.include_timings)
