"""JSON schema generation for run manifests and evaluation reports."""
import json
from pathlib import Path

from mspp_enhance.enhancement.engine import ENHANCEMENT_MODES
from mspp_enhance.utils.exceptions import ReportGenerationError


_NUMBER_OR_NULL = {"type": ["number", "null"]}


def _eval_report_properties() -> dict:
    return {
        "snrseg_improvement_db": {
            "type": "number",
            "description": "SegSNR(clean, enhanced) - SegSNR(clean, noisy) in dB"
        },
        "overall_snr_improvement_db": {
            "type": "number",
            "description": "Overall SNR(clean, enhanced) - overall SNR(clean, noisy) in dB"
        },
        "input_snr_db": {
            "type": "number",
            "description": "Overall SNR of the noisy input against the clean reference"
        },
        "per_frame_segsnr": {
            "type": "array",
            "items": {"type": "number", "minimum": -10, "maximum": 35},
            "description": "Clamped per-frame SNR of the enhanced signal (voiced frames only)"
        },
        "segsnr_noisy_db": {"type": "number"},
        "segsnr_enhanced_db": {"type": "number"},
        "overall_snr_enhanced_db": {"type": "number"},
        "pesq": {
            "type": ["number", "null"],
            "description": "Externally computed PESQ score; never filled in by this tool"
        }
    }


def _eval_report_object() -> dict:
    return {
        "type": "object",
        "required": ["snrseg_improvement_db", "overall_snr_improvement_db", "input_snr_db", "per_frame_segsnr"],
        "properties": _eval_report_properties()
    }


def _diagnostics_object() -> dict:
    return {
        "type": "object",
        "required": ["frames", "rectified_bins", "max_imag_residue"],
        "properties": {
            "frames": {"type": "integer", "minimum": 0},
            "speech_frames": {"type": "integer", "minimum": 0},
            "speech_ratio": {"type": "number", "minimum": 0, "maximum": 1},
            "rectified_bins": {"type": "integer", "minimum": 0},
            "max_gain_closed_form_error": {"type": "number", "minimum": 0},
            "max_imag_residue": {"type": "number", "minimum": 0},
            "unprojected_imag_residue": {"type": "number", "minimum": 0},
            "discarded_imag_energy_ratio": {"type": "number", "minimum": 0},
            "min_probability": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
            "max_probability": {"type": ["number", "null"], "minimum": 0, "maximum": 1}
        }
    }


def _stft_properties() -> dict:
    return {
        "window": {"type": "string", "enum": ["hamming", "modified_hanning", "rectangular"]},
        "frame_len": {"type": "integer", "minimum": 2},
        "hop": {"type": "integer", "minimum": 1}
    }


def generate_run_manifest_schema() -> dict:
    """Generate JSON schema for the manifest written by enhance/mix --report.

    Returns:
        JSON schema dict
    """
    return {
        "$schema": "https://json-schema.org/draft-07/schema#",
        "$id": "mspp-enhance/schemas/run-manifest.schema.json",
        "title": "MSPP Enhancement - Run Manifest",
        "description": "Inputs, outputs, resolved parameters and diagnostics of one pipeline command",
        "type": "object",
        "required": ["version", "command", "inputs", "outputs", "params"],
        "properties": {
            "version": {"type": "string"},
            "command": {"type": "string", "enum": ["enhance", "mix"]},
            "inputs": {"type": "object", "additionalProperties": {"type": "string"}},
            "outputs": {"type": "object", "additionalProperties": {"type": "string"}},
            "mode": {"type": ["string", "null"], "enum": list(ENHANCEMENT_MODES) + [None]},
            "compensation": {
                "type": ["object", "null"],
                "properties": {
                    "kind": {"type": "string", "enum": ["probabilistic", "constant"]},
                    "constant_rho": {"type": "number", "minimum": 0, "maximum": 1}
                }
            },
            "params": {
                "type": "object",
                "properties": {
                    "m_step": {
                        "type": "object",
                        "properties": {
                            **_stft_properties(),
                            "noise_beta": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                            "vad_threshold_db": {"type": "number"},
                            "init_frame_count": {"type": "integer", "minimum": 1}
                        }
                    },
                    "p_step": {
                        "type": "object",
                        "properties": {
                            **_stft_properties(),
                            "mu": {"type": "number", "exclusiveMinimum": 0},
                            "xi_min_db": {"type": "number"},
                            "xi_max_db": {"type": "number"},
                            "xi_peak_db": {"type": "number"},
                            "w_local": {"type": "integer", "minimum": 0},
                            "w_global": {"type": "integer", "minimum": 1},
                            "alpha_xi": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1}
                        }
                    }
                }
            },
            "sample_rate_hz": {"type": ["integer", "null"], "minimum": 1},
            "samples": {"type": ["integer", "null"], "minimum": 0},
            "speech_ratio": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
            "diagnostics": {"type": "object", "additionalProperties": _diagnostics_object()},
            "metrics": {"oneOf": [{"type": "null"}, _eval_report_object()]},
            "details": {
                "type": "object",
                "properties": {
                    "snr_db": {"type": "number"},
                    "noise_scale": {"type": "number", "minimum": 0},
                    "seed": {"type": ["integer", "null"]}
                }
            },
            "timings": {"type": "object", "additionalProperties": _NUMBER_OR_NULL}
        }
    }


def generate_eval_report_schema() -> dict:
    """Generate JSON schema for the report written by `mspp eval --report`.

    Returns:
        JSON schema dict
    """
    return {
        "$schema": "https://json-schema.org/draft-07/schema#",
        "$id": "mspp-enhance/schemas/eval-report.schema.json",
        "title": "MSPP Enhancement - Evaluation Report",
        "description": "SegSNR and overall SNR improvement of an enhanced file over its noisy input",
        "type": "object",
        "required": ["inputs", "segsnr_frame_len", "report"],
        "properties": {
            "inputs": {
                "type": "object",
                "required": ["clean", "noisy", "enhanced"],
                "properties": {
                    "clean": {"type": "string"},
                    "noisy": {"type": "string"},
                    "enhanced": {"type": "string"}
                }
            },
            "segsnr_frame_len": {"type": "integer", "minimum": 1},
            "report": _eval_report_object()
        }
    }


SCHEMA_GENERATORS = {
    "run-manifest": generate_run_manifest_schema,
    "eval-report": generate_eval_report_schema,
}


def _write_schema(path: Path, schema: dict) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(json.dumps(schema, indent=2))
    except OSError as e:
        raise ReportGenerationError(f"Failed to write schema to {path}: {e}") from e
    return path


def handle_schema_generation(args, ctx):
    """Handle generate-schema subcommand.

    Args:
        args: Command line arguments with report_type and schema_output
        ctx: CLI context

    Returns:
        List of written schema paths
    """
    output = Path(args.schema_output) if args.schema_output else Path("./output/schemas")
    written = []

    if getattr(args, 'report_type', None):
        schema = SCHEMA_GENERATORS[args.report_type]()
        # A path without a suffix is treated as a directory
        if output.is_dir() or (not output.exists() and output.suffix == ''):
            written.append(_write_schema(output / f"{args.report_type}.schema.json", schema))
        else:
            written.append(_write_schema(output, schema))
    else:
        for report_type, generator in SCHEMA_GENERATORS.items():
            written.append(_write_schema(output / f"{report_type}.schema.json", generator()))

    if not ctx.json_output_mode:
        for path in written:
            ctx.console.print(f"Schema written to {path}")
    return written
