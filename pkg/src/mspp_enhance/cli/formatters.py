"""Formatters for displaying enhancement results."""
from typing import Any, Dict, Optional

from rich.table import Table

from mspp_enhance.utils.constants import Style


def format_db(value: Optional[float]) -> str:
    """Format a dB value with a sign and colour by direction."""
    if value is None:
        return f"[{Style.DIM}]-[/{Style.DIM}]"
    if value > 0:
        return f"[{Style.GREEN}]{value:+.2f} dB[/{Style.GREEN}]"
    if value < 0:
        return f"[{Style.RED}]{value:+.2f} dB[/{Style.RED}]"
    return f"{value:+.2f} dB"


def build_eval_table(report: Dict[str, Any], title: str = "Evaluation") -> Table:
    """Key metrics of an EvalReport dict."""
    table = Table(title=title, show_header=True, header_style=Style.BOLD)
    table.add_column("Metric", style=Style.CYAN)
    table.add_column("Value", justify="right")
    table.add_row("Input SNR", f"{report['input_snr_db']:.2f} dB")
    table.add_row("SegSNR noisy", f"{report.get('segsnr_noisy_db', 0.0):.2f} dB")
    table.add_row("SegSNR enhanced", f"{report.get('segsnr_enhanced_db', 0.0):.2f} dB")
    table.add_row("SegSNR improvement", format_db(report['snrseg_improvement_db']))
    table.add_row("Overall SNR improvement", format_db(report['overall_snr_improvement_db']))
    table.add_row("Voiced frames", str(len(report.get('per_frame_segsnr', []))))
    return table


def build_diagnostics_table(diagnostics: Dict[str, Dict[str, Any]]) -> Table:
    """One row per AMS pass."""
    table = Table(title="Step diagnostics", show_header=True, header_style=Style.BOLD)
    table.add_column("Step", style=Style.CYAN)
    table.add_column("Frames", justify="right")
    table.add_column("Speech", justify="right")
    table.add_column("Rectified bins", justify="right")
    table.add_column("Max imag residue", justify="right")
    table.add_column("Prob. range", justify="right")

    for step, values in diagnostics.items():
        rectified = values['rectified_bins']
        rectified_cell = f"[{Style.RED}]{rectified}[/{Style.RED}]" if rectified else f"[{Style.GREEN}]0[/{Style.GREEN}]"
        low, high = values.get('min_probability'), values.get('max_probability')
        prob_cell = f"{low:.3f} – {high:.3f}" if low is not None else f"[{Style.DIM}]-[/{Style.DIM}]"
        speech = f"{values['speech_ratio']:.0%}" if values.get('speech_frames') else f"[{Style.DIM}]-[/{Style.DIM}]"
        table.add_row(step, str(values['frames']), speech, rectified_cell,
                      f"{values['max_imag_residue']:.2e}", prob_cell)
    return table


def build_manifest_table(manifest: Dict[str, Any]) -> Table:
    """Inputs, outputs and headline values of a RunManifest dict."""
    table = Table(title=f"mspp {manifest['command']}", show_header=False)
    table.add_column("Field", style=Style.CYAN)
    table.add_column("Value")

    for name, path in manifest.get('inputs', {}).items():
        table.add_row(f"input: {name}", path)
    for name, path in manifest.get('outputs', {}).items():
        table.add_row(f"output: {name}", f"[{Style.GREEN}]{path}[/{Style.GREEN}]")
    if manifest.get('mode'):
        table.add_row("mode", manifest['mode'])
    compensation = manifest.get('compensation')
    if compensation:
        rho = compensation.get('constant_rho')
        table.add_row("rho", "presence probabilities" if rho is None else f"constant {rho:g}")
    if manifest.get('samples') is not None:
        table.add_row("samples", f"{manifest['samples']:,} @ {manifest['sample_rate_hz']} Hz")
    if manifest.get('speech_ratio') is not None:
        table.add_row("VAD speech frames", f"{manifest['speech_ratio']:.1%}")
    for key, value in manifest.get('details', {}).items():
        table.add_row(key, "-" if value is None else (f"{value:.6g}" if isinstance(value, float) else str(value)))
    return table


def build_batch_table(summary: Dict[float, Dict[str, float]]) -> Table:
    """Mean SegSNR improvement per SNR level (rows) and mode (columns)."""
    modes = list(next(iter(summary.values())).keys()) if summary else []
    table = Table(title="Mean SegSNR improvement", show_header=True, header_style=Style.BOLD)
    table.add_column("Input SNR", justify="right", style=Style.CYAN)
    for mode in modes:
        table.add_column(mode, justify="right")
    for snr_db, by_mode in summary.items():
        table.add_row(f"{snr_db:g} dB", *[format_db(by_mode[mode]) for mode in modes])
    return table
