"""Tests for output strategies and table formatters."""
import json
from unittest.mock import Mock

import pytest
from rich.console import Console
from rich.table import Table

from mspp_enhance.cli.formatters import (
    build_batch_table,
    build_diagnostics_table,
    build_eval_table,
    build_manifest_table,
    format_db,
)
from mspp_enhance.cli.output_strategies import (
    JsonOutputStrategy,
    OutputStrategy,
    TextOutputStrategy,
    get_output_strategy,
)


@pytest.fixture
def mock_context():
    """Create a mock CLI context."""
    context = Mock()
    context.console = Mock()
    context.verbose = True
    context.json_output_mode = False
    return context


@pytest.fixture
def eval_payload():
    return {
        'snrseg_improvement_db': 4.2,
        'overall_snr_improvement_db': -0.3,
        'input_snr_db': 0.0,
        'per_frame_segsnr': [1.0, 2.0],
        'segsnr_noisy_db': -3.0,
        'segsnr_enhanced_db': 1.2,
        'overall_snr_enhanced_db': -0.3,
        'pesq': None,
    }


@pytest.fixture
def enhance_payload(eval_payload):
    return {
        'command': 'enhance',
        'inputs': {'noisy': 'noisy.wav'},
        'outputs': {'enhanced': 'out.wav'},
        'mode': 'mspp',
        'compensation': {'kind': 'constant', 'constant_rho': 0.5},
        'samples': 16000,
        'sample_rate_hz': 8000,
        'speech_ratio': 0.4,
        'details': {},
        'diagnostics': {
            'm_step': {'frames': 320, 'speech_frames': 128, 'speech_ratio': 0.4, 'rectified_bins': 0,
                       'max_imag_residue': 1e-17, 'min_probability': None, 'max_probability': None},
            'p_step': {'frames': 84, 'speech_frames': 0, 'speech_ratio': 0.0, 'rectified_bins': 0,
                       'max_imag_residue': 2e-17, 'min_probability': 0.0, 'max_probability': 0.9},
        },
        'metrics': eval_payload,
    }


def _render(table: Table) -> str:
    console = Console(width=200, record=True)
    console.print(table)
    return console.export_text()


@pytest.mark.unit
class TestGetOutputStrategy:
    """Test strategy selection."""

    def test_json(self):
        assert isinstance(get_output_strategy('json'), JsonOutputStrategy)

    def test_text_is_default(self):
        assert isinstance(get_output_strategy('text'), TextOutputStrategy)
        assert isinstance(get_output_strategy('other'), TextOutputStrategy)

    def test_base_is_abstract(self):
        with pytest.raises(TypeError):
            OutputStrategy()  # pylint: disable=abstract-class-instantiated


@pytest.mark.unit
class TestJsonOutputStrategy:
    """Test JSON output."""

    def test_prints_sorted_payload(self, mock_context, capsys):
        JsonOutputStrategy().output({'command': 'eval', 'payload': {'b': 1, 'a': None}}, mock_context)
        out = capsys.readouterr().out
        assert json.loads(out) == {'a': None, 'b': 1}
        assert out.index('"a"') < out.index('"b"')
        mock_context.console.print.assert_not_called()


@pytest.mark.unit
class TestTextOutputStrategy:
    """Test Rich console output."""

    def test_enhance_prints_three_tables(self, mock_context, enhance_payload):
        TextOutputStrategy().output({'command': 'enhance', 'payload': enhance_payload, 'timings': {'total': 1.0}},
                                    mock_context)
        printed = [call.args[0] for call in mock_context.console.print.call_args_list]
        assert sum(isinstance(p, Table) for p in printed) == 3
        assert "Completed in 1.00s" in printed[-1]

    def test_timings_hidden_without_verbose(self, mock_context, enhance_payload):
        mock_context.verbose = False
        TextOutputStrategy().output({'command': 'enhance', 'payload': enhance_payload, 'timings': {'total': 1.0}},
                                    mock_context)
        assert mock_context.console.print.call_count == 3

    def test_batch(self, mock_context):
        payload = {'rows': 4, 'results_csv': 'r.csv', 'summary_csv': 's.csv'}
        TextOutputStrategy().output({'command': 'batch', 'payload': payload, 'summary': {0.0: {'mspp': 1.0}}},
                                    mock_context)
        printed = [call.args[0] for call in mock_context.console.print.call_args_list]
        assert isinstance(printed[0], Table)
        assert "4 result rows" in printed[1]

    def test_schema_prints_nothing(self, mock_context):
        TextOutputStrategy().output({'command': 'generate-schema', 'payload': {'written': []}}, mock_context)
        mock_context.console.print.assert_not_called()


@pytest.mark.unit
class TestFormatters:
    """Test Rich table builders."""

    @pytest.mark.parametrize("value,expected", [
        (1.5, "[green]+1.50 dB[/green]"),
        (-2.0, "[red]-2.00 dB[/red]"),
        (0.0, "+0.00 dB"),
    ])
    def test_format_db(self, value, expected):
        assert format_db(value) == expected

    def test_eval_table(self, eval_payload):
        text = _render(build_eval_table(eval_payload))
        assert "+4.20 dB" in text
        assert "-0.30 dB" in text

    def test_diagnostics_table(self, enhance_payload):
        text = _render(build_diagnostics_table(enhance_payload['diagnostics']))
        assert "m_step" in text
        assert "40%" in text
        assert "0.000 – 0.900" in text

    def test_manifest_table(self, enhance_payload):
        text = _render(build_manifest_table(enhance_payload))
        assert "constant 0.5" in text
        assert "16,000 @ 8000 Hz" in text
        assert "40.0%" in text

    def test_batch_table(self):
        text = _render(build_batch_table({-5.0: {'mspp': 3.0, 'm-only': 1.0}, 5.0: {'mspp': 0.5, 'm-only': 0.2}}))
        assert "-5 dB" in text
        assert "+3.00 dB" in text
        assert "m-only" in text

    def test_empty_batch_table(self):
        assert isinstance(build_batch_table({}), Table)
