"""
Tests for configuration loader functionality.

Tests YAML loading, merging, validation, and error handling.
"""

from pathlib import Path

import pytest
import yaml

from ...custom_types import Family, InitStrategy, VariantTag
from ...exceptions import ConfigurationError
from ..config_loader import ConfigLoader, load_config_from_path
from ..config_model import Config

FIXTURES = Path(__file__).parent / "fixtures"


def _write_yaml(path: Path, data) -> Path:
    with open(path, "w") as f:
        yaml.safe_dump(data, f)
    return path


class TestConfigLoader:
    """Test configuration loader functionality."""

    def test_initialization(self):
        """Test ConfigLoader initialization."""
        loader = ConfigLoader()
        assert loader.default_config_path.name == "default_config.yaml"
        assert loader._default_config_dict is None

        custom_path = Path("custom_default.yaml")
        assert ConfigLoader(custom_path).default_config_path == custom_path

    def test_bundled_defaults_match_models(self):
        """Test that the bundled YAML agrees with the model defaults."""
        assert ConfigLoader().load_default_config() == Config()

    def test_custom_default_file(self, tmp_path):
        default_file = _write_yaml(
            tmp_path / "defaults.yaml", {"fit": {"g": 5, "family": "umsn"}}
        )

        config = ConfigLoader(default_file).load_default_config()

        assert config.fit.g == 5
        assert config.fit.family is Family.UMSN

    def test_missing_default_file(self, tmp_path):
        """Test falling back to model defaults."""
        config = ConfigLoader(tmp_path / "none.yaml").load_default_config()
        assert config == Config()

    def test_load_fixture(self):
        config = ConfigLoader().load_config(FIXTURES / "valid_config.yaml")

        assert config.fit.family is Family.RMSN
        assert config.fit.g == 2
        assert config.fit.init is InitStrategy.RANDOM_STARTS
        assert config.data.label_column == "label"
        assert config.output.report_variant is VariantTag.SNI
        assert config.logging.level == "DEBUG"

    def test_deep_merge_keeps_defaults(self, tmp_path):
        """Test that a partial section keeps the other default keys."""
        path = _write_yaml(tmp_path / "partial.yaml", {"fit": {"g": 4}})

        config = ConfigLoader().load_config(path)

        assert config.fit.g == 4
        assert config.fit.max_iter == 500
        assert config.output.output_dir == "output"

    def test_deep_merge(self):
        loader = ConfigLoader()
        base = {"a": {"x": 1, "y": 2}, "b": 3}

        merged = loader._deep_merge(base, {"a": {"y": 5}, "c": 6})

        assert merged == {"a": {"x": 1, "y": 5}, "b": 3, "c": 6}
        assert base == {"a": {"x": 1, "y": 2}, "b": 3}

    def test_caching(self, tmp_path):
        loader = ConfigLoader()
        path = _write_yaml(tmp_path / "c.yaml", {"fit": {"seed": 3}})

        assert loader.load_config(path) is loader.load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="not found"):
            ConfigLoader().load_config(tmp_path / "missing.yaml")

    def test_invalid_values(self):
        """Test the section name travels with the error."""
        with pytest.raises(ConfigurationError) as exc_info:
            ConfigLoader().load_config(FIXTURES / "invalid_config.yaml")

        assert exc_info.value.config_section == "fit"
        assert exc_info.value.details["config_path"].endswith("invalid_config.yaml")

    def test_malformed_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("fit: [unclosed\n")

        with pytest.raises(ConfigurationError, match="parse"):
            ConfigLoader().load_config(path)

    def test_non_mapping_root(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")

        with pytest.raises(ConfigurationError, match="mapping"):
            ConfigLoader().load_config(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")

        assert ConfigLoader().load_config(path) == Config()


class TestValidateConfigFile:
    """Test validation without loading."""

    def test_valid(self):
        ok, message = ConfigLoader().validate_config_file(
            FIXTURES / "valid_config.yaml"
        )
        assert ok is True
        assert message is None

    def test_invalid(self):
        ok, message = ConfigLoader().validate_config_file(
            FIXTURES / "invalid_config.yaml"
        )
        assert ok is False
        assert "validation failed" in message

    def test_missing(self, tmp_path):
        ok, message = ConfigLoader().validate_config_file(tmp_path / "x.yaml")
        assert ok is False
        assert "not found" in message


class TestSaveAndSchema:
    """Test writing configurations and the JSON schema."""

    def test_save_round_trip(self, tmp_path):
        loader = ConfigLoader()
        config = Config.from_dict({"fit": {"family": "umst", "g": 2}})

        path = tmp_path / "nested" / "saved.yaml"
        loader.save_config(config, path)

        assert ConfigLoader().load_config(path) == config

    def test_schema(self):
        schema = ConfigLoader().get_config_schema()
        assert set(schema["properties"]) >= {"fit", "data", "output", "logging"}


class TestLoadConfigFromPath:
    """Test the convenience loader."""

    def test_defaults(self):
        assert load_config_from_path() == Config()

    def test_path(self):
        config = load_config_from_path(FIXTURES / "valid_config.yaml")
        assert config.fit.seed == 7
