"""
Tests for configuration loading, defaults and validation.
"""
import math
from pathlib import Path

import pytest

from mspp_enhance.enhancement.params import EnhancementParams, params_from_config
from mspp_enhance.utils.config import read_config_from_yaml
from mspp_enhance.utils.exceptions import ConfigurationError


CONFIGS_DIR = Path(__file__).parent / "fixtures" / "configs"


@pytest.fixture(autouse=True)
def _clear_env(monkeypatch):
    monkeypatch.delenv("MSPP_LOG_LEVEL", raising=False)


@pytest.mark.unit
class TestDefaults:
    """Test the all-defaults configuration."""

    def test_no_file(self):
        config = read_config_from_yaml(None)
        assert config['m_step']['frame_len'] == 100
        assert config['m_step']['hop'] == 50
        assert config['p_step']['frame_len'] == 256
        assert config['p_step']['hop'] == 192
        assert config['p_step']['window'] == 'modified_hanning'
        assert config['metrics']['segsnr_frame_len'] == 160
        assert config['batch']['workers'] == 1
        assert config['manifest']['include_timings'] is False
        assert config['logging'] == {'file': 'logs/mspp.log', 'level': 'INFO'}

    def test_empty_file(self):
        config = read_config_from_yaml(str(CONFIGS_DIR / "empty_config.yaml"))
        assert config == read_config_from_yaml(None)

    def test_missing_optional_file_uses_defaults(self, temp_dir):
        config = read_config_from_yaml(str(temp_dir / "absent.yaml"))
        assert config['batch']['workers'] == 1

    def test_missing_required_file(self, temp_dir):
        with pytest.raises(ConfigurationError, match="not found"):
            read_config_from_yaml(str(temp_dir / "absent.yaml"), required=True)

    def test_defaults_build_default_params(self):
        assert params_from_config(read_config_from_yaml(None)) == EnhancementParams()


@pytest.mark.unit
class TestFileValues:
    """Test values read from YAML files."""

    def test_minimal(self):
        config = read_config_from_yaml(str(CONFIGS_DIR / "minimal_config.yaml"))
        assert config['logging']['level'] == 'INFO'
        assert config['p_step']['mu'] == pytest.approx(0.6)

    def test_maximal(self):
        config = read_config_from_yaml(str(CONFIGS_DIR / "maximal_config.yaml"))
        assert config['logging']['level'] == 'DEBUG'
        assert config['batch']['workers'] == 4
        assert config['manifest']['include_timings'] is True
        assert config['metrics']['segsnr_frame_len'] == 256

    def test_maximal_params(self):
        params = params_from_config(read_config_from_yaml(str(CONFIGS_DIR / "maximal_config.yaml")))
        assert params.mu == pytest.approx(0.5)
        assert params.xi_min == pytest.approx(10 ** -1.2)
        assert params.xi_max == pytest.approx(10 ** -0.6)
        assert params.w_local == 2
        assert params.w_global == 10
        assert params.alpha_xi == pytest.approx(0.6)
        assert params.p_config.hop == 64
        assert params.noise_beta == pytest.approx(0.8)
        assert params.vad_threshold_db == pytest.approx(4.0)
        assert params.init_frame_count == 8

    def test_params_round_trip_in_db(self):
        params = params_from_config(read_config_from_yaml(str(CONFIGS_DIR / "maximal_config.yaml")))
        resolved = params.to_dict()['p_step']
        assert resolved['xi_min_db'] == pytest.approx(-12.0)
        assert resolved['xi_max_db'] == pytest.approx(-6.0)
        assert resolved['hop'] == 64


@pytest.mark.unit
class TestInvalidFiles:
    """Test rejection of invalid configuration files."""

    @pytest.mark.parametrize("name,match", [
        ("invalid_log_level.yaml", "Invalid log level"),
        ("malformed_yaml.yaml", "Error reading configuration"),
        ("invalid_workers.yaml", "batch.workers"),
        ("invalid_section.yaml", "p_step"),
    ])
    def test_rejected_on_load(self, name, match):
        with pytest.raises(ConfigurationError, match=match):
            read_config_from_yaml(str(CONFIGS_DIR / name))

    def test_hop_longer_than_frame(self):
        config = read_config_from_yaml(str(CONFIGS_DIR / "invalid_hop.yaml"))
        with pytest.raises(ConfigurationError):
            params_from_config(config)

    def test_top_level_list(self, temp_dir):
        path = temp_dir / "list.yaml"
        path.write_text("- a\n- b\n", encoding="utf-8")
        with pytest.raises(ConfigurationError, match="must be a mapping"):
            read_config_from_yaml(str(path))


@pytest.mark.unit
class TestParamsValidation:
    """Test EnhancementParams range checks."""

    @pytest.mark.parametrize("overrides", [
        {'mu': 0.0},
        {'xi_min': 0.5, 'xi_max': 0.4},
        {'alpha_xi': 1.0},
        {'noise_beta': 0.0},
        {'w_local': 5, 'w_global': 5},
        {'init_frame_count': 0},
        {'mu': math.nan},
    ])
    def test_rejected(self, overrides):
        with pytest.raises(ConfigurationError):
            EnhancementParams(**overrides)

    def test_non_numeric_value(self):
        with pytest.raises(ConfigurationError, match="mu must be numeric"):
            params_from_config({'p_step': {'mu': 'high'}})

    def test_boolean_rejected(self):
        with pytest.raises(ConfigurationError):
            params_from_config({'m_step': {'hop': True}})

    def test_thresholds_converted_from_db(self):
        params = params_from_config({'p_step': {'xi_min_db': -10.0, 'xi_max_db': -5.0}})
        assert params.xi_min == pytest.approx(0.1)
        assert params.xi_max == pytest.approx(10 ** -0.5)
