"""Subcommand handlers.

Each handler does the work for one subcommand and returns a result dict
``{'command': ..., 'payload': ...}`` for the active output strategy.
"""
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable, Dict

from mspp_enhance.cli.schema import handle_schema_generation
from mspp_enhance.dsp.stft import StftConfig
from mspp_enhance.enhancement.p_step import CompensationMode
from mspp_enhance.metrics.spectrogram import spectrogram_export
from mspp_enhance.audio.wav_io import read_wav
from mspp_enhance.pipeline.batch_config import load_batch_config
from mspp_enhance.pipeline import runner
from mspp_enhance.utils.constants import DEFAULT_SNR_SWEEP_DB, SpectrogramFormat


def _compensation(args) -> CompensationMode:
    rho = getattr(args, 'rho', None)
    return CompensationMode.constant(rho) if rho is not None else CompensationMode.probabilistic()


def handle_enhance(args, ctx) -> Dict[str, Any]:
    """Enhance one file and optionally write its manifest."""
    params = ctx.enhancement_params()
    ctx.log_verbose(f"Enhancing {args.input} with mode {args.mode}")
    manifest = runner.enhance(
        args.input, args.output, params, args.mode, _compensation(args),
        clean_path=args.clean,
        segsnr_frame_len=ctx.segsnr_frame_len,
    )
    if args.report:
        ctx.manifest_writer().write(manifest, args.report)
        ctx.log_verbose(f"Manifest written to {args.report}")
    payload = manifest.to_dict(include_timings=ctx.include_timings)
    return {'command': 'enhance', 'payload': payload, 'timings': dict(manifest.timings)}


def handle_mix(args, ctx) -> Dict[str, Any]:
    """Mix noise into clean speech at --snr."""
    manifest = runner.mix(args.clean, args.noise, args.snr, args.output, seed=args.seed)
    if args.report:
        ctx.manifest_writer().write(manifest, args.report)
    return {'command': 'mix', 'payload': manifest.to_dict()}


def handle_eval(args, ctx) -> Dict[str, Any]:
    """Evaluate an enhanced file against its clean reference."""
    frame_len = args.frame_len or ctx.segsnr_frame_len
    report = runner.evaluate(args.clean, args.noisy, args.enhanced, args.report, frame_len)
    return {'command': 'eval', 'payload': report.to_dict()}


def handle_batch(args, ctx) -> Dict[str, Any]:
    """Run a batch manifest grid."""
    batch = load_batch_config(args.manifest)
    if args.output_dir:
        batch = replace(batch, output_dir=Path(args.output_dir))
    workers = args.workers or ctx.batch_workers
    ctx.log_verbose(f"Running {batch.cell_count()} batch rows on {workers} worker(s)")
    result = runner.run_batch(
        batch, ctx.enhancement_params(), _compensation(args), workers,
        ctx.segsnr_frame_len,
    )
    payload = {
        'summary_csv': str(result.summary_csv),
        'results_csv': str(result.results_csv),
        'rows': len(result.rows),
        'summary': {f"{snr:g}": by_mode for snr, by_mode in result.summary.items()},
    }
    return {'command': 'batch', 'payload': payload, 'summary': result.summary}


def handle_synth(args, ctx) -> Dict[str, Any]:
    """Write a synthetic corpus and its batch manifest."""
    manifest_path = runner.synth_corpus(
        args.output_dir, count=args.count, duration_s=args.duration, seed=args.seed,
        noise_kinds=args.noise, snr_levels_db=args.snr or DEFAULT_SNR_SWEEP_DB, modes=args.mode,
    )
    ctx.log_verbose(f"Corpus written to {args.output_dir}")
    return {'command': 'synth', 'payload': {'output_dir': str(args.output_dir), 'manifest': str(manifest_path),
                                            'clean_files': args.count, 'noise_kinds': list(args.noise)}}


def _spectrogram_format(args) -> SpectrogramFormat:
    if args.spectrogram_format:
        return SpectrogramFormat(args.spectrogram_format)
    if Path(args.output).suffix.lower() == '.pgm':
        return SpectrogramFormat.PGM
    return SpectrogramFormat.CSV


def handle_spectrogram(args, ctx) -> Dict[str, Any]:
    """Export a spectrogram with the framing of one step."""
    params = ctx.enhancement_params()
    config: StftConfig = params.m_config if args.step == 'm' else params.p_config
    fmt = _spectrogram_format(args)
    path = spectrogram_export(read_wav(args.input), config, args.output, fmt)
    return {'command': 'spectrogram', 'payload': {'input': args.input, 'output': str(path), 'format': fmt.value,
                                                  'framing': config.to_dict()}}


def handle_generate_schema(args, ctx) -> Dict[str, Any]:
    """Write JSON schemas."""
    written = handle_schema_generation(args, ctx)
    return {'command': 'generate-schema', 'payload': {'written': [str(p) for p in written]}}


COMMAND_HANDLERS: Dict[str, Callable[[Any, Any], Dict[str, Any]]] = {
    'enhance': handle_enhance,
    'mix': handle_mix,
    'eval': handle_eval,
    'batch': handle_batch,
    'synth': handle_synth,
    'spectrogram': handle_spectrogram,
    'generate-schema': handle_generate_schema,
}
