"""
End-to-end pipeline operations behind the CLI subcommands.

Each operation reads its inputs, runs entirely in memory and only then
writes outputs, so a failure never leaves a partial file behind.
"""

import csv
import io
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import yaml

from mspp_enhance.audio.mixing import mix_at_snr
from mspp_enhance.audio.synthesis import synth_noise, synth_speech_like
from mspp_enhance.audio.wav_io import read_wav, write_wav
from mspp_enhance.enhancement.engine import enhance_buffer
from mspp_enhance.enhancement.p_step import CompensationMode
from mspp_enhance.enhancement.params import EnhancementParams
from mspp_enhance.metrics.snr import EvalReport, improvement
from mspp_enhance.pipeline.batch_config import BatchConfig
from mspp_enhance.pipeline.manifest import RunManifest, write_json
from mspp_enhance.utils.constants import (
    DEFAULT_SAMPLE_RATE_HZ,
    DEFAULT_SEGSNR_FRAME_LEN,
    DEFAULT_SNR_SWEEP_DB,
    EnhanceMode,
    NoiseKind,
)
from mspp_enhance.utils.exceptions import ContractViolationError, EvaluationError, ReportGenerationError
from mspp_enhance.utils.models import SampleBuffer


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _require_same_length(reference: SampleBuffer, reference_path: PathLike,
                         other: SampleBuffer, other_path: PathLike) -> None:
    if len(reference) != len(other):
        raise EvaluationError(
            f"Length mismatch: {other_path} has {len(other)} samples, {reference_path} has {len(reference)}"
        )


def _noise_segment(noise: SampleBuffer, length: int, rng: Optional[np.random.Generator]) -> SampleBuffer:
    """Cut `length` samples from the noise, at a seeded offset when rng is given."""
    if len(noise) < length:
        raise ContractViolationError(
            f"Noise ({len(noise)} samples) is shorter than clean speech ({length} samples)"
        )
    offset = int(rng.integers(0, len(noise) - length + 1)) if rng is not None else 0
    return noise.with_samples(noise.samples[offset:offset + length])


def enhance(noisy_path: PathLike, out_path: PathLike, params: Optional[EnhancementParams] = None,
            mode: str = EnhanceMode.MSPP.value, compensation: Optional[CompensationMode] = None,
            clean_path: Optional[PathLike] = None,
            segsnr_frame_len: int = DEFAULT_SEGSNR_FRAME_LEN) -> RunManifest:
    """Enhance one WAV file.

    With a clean reference the manifest also carries the improvement metrics.

    Raises:
        AudioIOError: If a WAV cannot be read or written
        ContractViolationError: If the input is too short or a run-time check fails
    """
    params = params or EnhancementParams()
    compensation = compensation or CompensationMode.probabilistic()
    noisy = read_wav(noisy_path)
    clean = None
    if clean_path is not None:
        clean = read_wav(clean_path)
        _require_same_length(clean, clean_path, noisy, noisy_path)

    started = time.perf_counter()
    result = enhance_buffer(noisy, params, mode, compensation)
    elapsed = time.perf_counter() - started

    manifest = RunManifest(
        command='enhance',
        inputs={'noisy': str(noisy_path)},
        outputs={'enhanced': str(out_path)},
        mode=mode,
        compensation=compensation.to_dict() if mode in (EnhanceMode.MSPP.value, EnhanceMode.P_ONLY.value) else None,
        params=params.to_dict(),
        sample_rate_hz=noisy.sample_rate_hz,
        samples=len(noisy),
        speech_ratio=result.speech_ratio,
        diagnostics={name: diag.to_dict() for name, diag in result.steps.items()},
        timings={name: diag.duration_seconds for name, diag in result.steps.items()},
    )
    manifest.timings['total'] = elapsed

    if clean is not None:
        manifest.inputs['clean'] = str(clean_path)
        manifest.metrics = improvement(clean, noisy, result.output, segsnr_frame_len).to_dict()

    write_wav(result.output, out_path)
    return manifest


def mix(clean_path: PathLike, noise_path: PathLike, snr_db: float, out_path: PathLike,
        seed: Optional[int] = None) -> RunManifest:
    """Mix a noise file into a clean file at the requested SNR.

    Without a seed the noise is taken from its start; with a seed the
    segment offset is drawn from numpy's default generator.

    Raises:
        AudioIOError: If a WAV cannot be read or written
        ContractViolationError: If the noise is too short or either signal is silent
    """
    clean = read_wav(clean_path)
    noise = read_wav(noise_path)
    rng = np.random.default_rng(seed) if seed is not None else None
    segment = _noise_segment(noise, len(clean), rng)
    noisy, scale = mix_at_snr(clean, segment, snr_db)
    write_wav(noisy, out_path)

    return RunManifest(
        command='mix',
        inputs={'clean': str(clean_path), 'noise': str(noise_path)},
        outputs={'noisy': str(out_path)},
        sample_rate_hz=clean.sample_rate_hz,
        samples=len(clean),
        details={'snr_db': float(snr_db), 'noise_scale': scale, 'seed': seed},
    )


def evaluate(clean_path: PathLike, noisy_path: PathLike, enhanced_path: PathLike,
             report_path: Optional[PathLike] = None,
             frame_len: int = DEFAULT_SEGSNR_FRAME_LEN) -> EvalReport:
    """Compute improvement metrics for three equal-length WAV files.

    Raises:
        EvaluationError: On a length mismatch (naming the offending file) or a silent reference
        ReportGenerationError: If the report cannot be written
    """
    clean = read_wav(clean_path)
    noisy = read_wav(noisy_path)
    enhanced = read_wav(enhanced_path)
    _require_same_length(clean, clean_path, noisy, noisy_path)
    _require_same_length(clean, clean_path, enhanced, enhanced_path)

    report = improvement(clean, noisy, enhanced, frame_len)
    if report_path is not None:
        write_json({
            'inputs': {'clean': str(clean_path), 'noisy': str(noisy_path), 'enhanced': str(enhanced_path)},
            'segsnr_frame_len': frame_len,
            'report': report.to_dict(),
        }, report_path)
    return report


@dataclass
class BatchRow:
    """One (clean, noise, SNR, mode) result."""
    clean: str
    noise: str
    snr_db: float
    mode: str
    input_snr_db: float
    snrseg_improvement_db: float
    overall_snr_improvement_db: float
    rectified_bins: int
    speech_ratio: Optional[float]


@dataclass
class BatchResult:
    """All rows of a batch run plus the per-SNR, per-mode mean SegSNR improvements."""
    rows: List[BatchRow]
    summary: Dict[float, Dict[str, float]]
    summary_csv: Path
    results_csv: Path
    written: List[Path] = field(default_factory=list)


def _cell_name(clean: Path, noise: Path, snr_db: float) -> str:
    return f"{clean.stem}__{noise.stem}__snr{snr_db:+g}"


def _run_cell(job) -> Tuple[List[BatchRow], List[Path]]:
    (clean_path, clean, noise_path, segment, snr_db, batch, params, compensation, frame_len) = job
    name = _cell_name(clean_path, noise_path, snr_db)
    noisy, _ = mix_at_snr(clean, segment, snr_db)
    noisy_path = batch.output_dir / 'noisy' / f"{name}.wav"
    write_wav(noisy, noisy_path)
    # Enhance what the WAV actually holds.
    noisy = read_wav(noisy_path)

    rows, written = [], [noisy_path]
    for mode in batch.modes:
        result = enhance_buffer(noisy, params, mode, compensation)
        out_path = batch.output_dir / 'enhanced' / mode / f"{name}.wav"
        write_wav(result.output, out_path)
        written.append(out_path)
        report = improvement(clean, noisy, read_wav(out_path), frame_len)
        rows.append(BatchRow(
            clean=str(clean_path), noise=str(noise_path), snr_db=snr_db, mode=mode,
            input_snr_db=report.input_snr_db,
            snrseg_improvement_db=report.snrseg_improvement_db,
            overall_snr_improvement_db=report.overall_snr_improvement_db,
            rectified_bins=result.rectified_bins,
            speech_ratio=result.speech_ratio,
        ))
    return rows, written


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    tmp_path = path.with_name(f".{path.name}.tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp_path, 'w', encoding='ascii', newline='') as f:
            f.write(buffer.getvalue())
        os.replace(tmp_path, path)
    except OSError as e:
        if tmp_path.exists():
            tmp_path.unlink()
        raise ReportGenerationError(f"Failed to write CSV to {path}: {e}") from e
    logger.info("Wrote %s", path)
    return path


def _fmt(value: Optional[float]) -> str:
    return '' if value is None else f"{value:.4f}"


def run_batch(batch: BatchConfig, params: Optional[EnhancementParams] = None,
              compensation: Optional[CompensationMode] = None, workers: int = 1,
              segsnr_frame_len: int = DEFAULT_SEGSNR_FRAME_LEN) -> BatchResult:
    """Run the mix -> enhance -> eval grid and write results.csv and summary.csv.

    Cells (clean, noise, SNR) run on a thread pool of `workers`; rows are
    collected in grid order, so the outputs do not depend on the worker count.

    Raises:
        AudioIOError: If an input cannot be read or an output written
        ContractViolationError: If a cell violates a numeric contract
    """
    params = params or EnhancementParams()
    compensation = compensation or CompensationMode.probabilistic()
    cleans = [(path, read_wav(path)) for path in batch.clean]
    noises = [(path, read_wav(path)) for path in batch.noise]

    jobs = []
    for ci, (clean_path, clean) in enumerate(cleans):
        for ni, (noise_path, noise) in enumerate(noises):
            segment = _noise_segment(noise, len(clean), np.random.default_rng([batch.seed, ci, ni]))
            for snr_db in batch.snr_levels_db:
                jobs.append((clean_path, clean, noise_path, segment, snr_db, batch, params, compensation,
                             segsnr_frame_len))

    logger.info("Batch: %s cells x %s modes on %s worker(s)", len(jobs), len(batch.modes), workers)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        outcomes = list(executor.map(_run_cell, jobs))

    rows = [row for cell_rows, _ in outcomes for row in cell_rows]
    written = [path for _, paths in outcomes for path in paths]

    summary: Dict[float, Dict[str, float]] = {}
    for snr_db in batch.snr_levels_db:
        summary[snr_db] = {}
        for mode in batch.modes:
            values = [r.snrseg_improvement_db for r in rows if r.snr_db == snr_db and r.mode == mode]
            summary[snr_db][mode] = float(np.mean(values))

    results_csv = _write_csv(
        batch.output_dir / 'results.csv',
        ['clean', 'noise', 'snr_db', 'mode', 'input_snr_db', 'snrseg_improvement_db',
         'overall_snr_improvement_db', 'rectified_bins', 'speech_ratio'],
        [[r.clean, r.noise, f"{r.snr_db:g}", r.mode, _fmt(r.input_snr_db), _fmt(r.snrseg_improvement_db),
          _fmt(r.overall_snr_improvement_db), r.rectified_bins, _fmt(r.speech_ratio)] for r in rows],
    )
    summary_csv = _write_csv(
        batch.output_dir / 'summary.csv',
        ['snr_db'] + list(batch.modes),
        [[f"{snr_db:g}"] + [_fmt(summary[snr_db][mode]) for mode in batch.modes] for snr_db in batch.snr_levels_db],
    )
    return BatchResult(rows=rows, summary=summary, summary_csv=summary_csv, results_csv=results_csv,
                       written=written)


def synth_corpus(out_dir: PathLike, count: int = 10, duration_s: float = 3.0, seed: int = 0,
                 noise_kinds: Sequence[str] = (NoiseKind.WHITE.value,),
                 snr_levels_db: Sequence[float] = DEFAULT_SNR_SWEEP_DB,
                 modes: Sequence[str] = (EnhanceMode.MSPP.value,),
                 sample_rate_hz: int = DEFAULT_SAMPLE_RATE_HZ) -> Path:
    """Write a reproducible synthetic corpus and a batch manifest that uses it.

    clean/clean_NN.wav uses seed + NN; noise/<kind>.wav is one second longer
    than the clean files so batch runs can draw seeded offsets.

    Returns:
        Path to the written batch.yaml

    Raises:
        ContractViolationError: If count or duration is not positive, or a noise kind is unknown
        AudioIOError: If a WAV cannot be written
        ReportGenerationError: If the manifest cannot be written
    """
    if count < 1:
        raise ContractViolationError(f"Corpus size must be >= 1, got {count}")
    valid_kinds = {k.value for k in NoiseKind}
    unknown = [k for k in noise_kinds if k not in valid_kinds]
    if unknown:
        raise ContractViolationError(f"Unknown noise kind(s): {', '.join(map(str, unknown))}")
    out_dir = Path(out_dir)
    clean_files = []
    for index in range(count):
        relative = Path('clean') / f"clean_{index:02d}.wav"
        write_wav(synth_speech_like(seed + index, duration_s, sample_rate_hz), out_dir / relative)
        clean_files.append(relative.as_posix())

    noise_files = []
    for index, kind in enumerate(noise_kinds):
        relative = Path('noise') / f"{NoiseKind(kind).value}.wav"
        write_wav(synth_noise(kind, seed + 1000 + index, duration_s + 1.0, sample_rate_hz), out_dir / relative)
        noise_files.append(relative.as_posix())

    manifest = {
        'clean': clean_files,
        'noise': noise_files,
        'snr_db': [float(s) for s in snr_levels_db],
        'modes': list(modes),
        'seed': seed,
        'output_dir': 'results',
    }
    manifest_path = out_dir / 'batch.yaml'
    tmp_path = manifest_path.with_name(f".{manifest_path.name}.tmp")
    try:
        with open(tmp_path, 'w', encoding='utf-8') as f:
            yaml.safe_dump(manifest, f, sort_keys=False)
        os.replace(tmp_path, manifest_path)
    except OSError as e:
        if tmp_path.exists():
            tmp_path.unlink()
        raise ReportGenerationError(f"Failed to write batch manifest {manifest_path}: {e}") from e

    logger.info("Synthesized %s clean files and %s noise files in %s", count, len(noise_files), out_dir)
    return manifest_path
