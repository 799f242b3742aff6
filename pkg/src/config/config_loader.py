"""
Configuration loader for YAML-based configuration files.

User files are deep-merged over the bundled defaults and validated by the
pydantic models.
"""

import logging
from pathlib import Path
from typing import Any

import yaml
from pydantic import ValidationError

from ..exceptions import ConfigurationError
from .config_model import Config

logger = logging.getLogger(__name__)


class ConfigLoader:
    """
    YAML configuration loader with merging and validation.

    Args:
        default_config_path: Path to the default configuration file
    """

    def __init__(self, default_config_path: Path | None = None) -> None:
        self.default_config_path = (
            default_config_path or Path(__file__).parent / "default_config.yaml"
        )
        self._default_config_dict: dict[str, Any] | None = None
        self._config_cache: dict[str, Config] = {}

    def _read_yaml(self, path: Path) -> dict[str, Any]:
        try:
            with open(path, encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigurationError(
                f"Failed to parse YAML configuration: {e}", config_path=str(path)
            ) from e
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigurationError(
                "Configuration root must be a mapping", config_path=str(path)
            )
        return data

    def _validate(self, data: dict[str, Any], path: Path | None = None) -> Config:
        try:
            return Config.from_dict(data)
        except ValidationError as e:
            section = str(e.errors()[0]["loc"][0]) if e.errors() else None
            raise ConfigurationError(
                f"Configuration validation failed: {e}",
                config_path=str(path) if path else None,
                config_section=section,
            ) from e

    def _load_default_config_dict(self) -> dict[str, Any]:
        if self._default_config_dict is None:
            if self.default_config_path.exists():
                self._default_config_dict = self._read_yaml(self.default_config_path)
            else:
                logger.warning(
                    f"Default configuration file not found: {self.default_config_path}"
                )
                self._default_config_dict = {}
        return self._default_config_dict

    def _deep_merge(
        self, base: dict[str, Any], override: dict[str, Any]
    ) -> dict[str, Any]:
        """Merge ``override`` into a copy of ``base``, recursing into mappings."""
        merged = base.copy()
        for key, value in override.items():
            if isinstance(merged.get(key), dict) and isinstance(value, dict):
                merged[key] = self._deep_merge(merged[key], value)
            else:
                merged[key] = value
        return merged

    def load_default_config(self) -> Config:
        """
        Load the bundled defaults (model defaults if the file is missing).
        """
        return self._validate(
            self._load_default_config_dict(), self.default_config_path
        )

    def load_config(self, config_path: str | Path) -> Config:
        """
        Load a user configuration merged over the defaults.

        Args:
            config_path: Path to configuration file

        Returns:
            Config: Validated configuration instance

        Raises:
            ConfigurationError: If the file is missing, unparsable or invalid
        """
        config_path = Path(config_path)
        cache_key = str(config_path.absolute())
        if cache_key in self._config_cache:
            logger.debug(f"Returning cached configuration for: {config_path}")
            return self._config_cache[cache_key]

        if not config_path.exists():
            raise ConfigurationError(
                f"Configuration file not found: {config_path}",
                config_path=str(config_path),
            )
        logger.info(f"Loading configuration from: {config_path}")
        merged = self._deep_merge(
            self._load_default_config_dict(), self._read_yaml(config_path)
        )
        config = self._validate(merged, config_path)
        self._config_cache[cache_key] = config
        return config

    def validate_config_file(self, config_path: str | Path) -> tuple[bool, str | None]:
        """
        Validate a configuration file without caching it.

        Returns:
            tuple[bool, str | None]: (is_valid, error_message)
        """
        config_path = Path(config_path)
        if not config_path.exists():
            return False, f"Configuration file not found: {config_path}"
        try:
            merged = self._deep_merge(
                self._load_default_config_dict(), self._read_yaml(config_path)
            )
            self._validate(merged, config_path)
        except ConfigurationError as e:
            return False, str(e)
        return True, None

    def get_config_schema(self) -> dict[str, Any]:
        """JSON schema of the configuration file."""
        return Config.model_json_schema()

    def save_config(self, config: Config, output_path: str | Path) -> None:
        """Write ``config`` as YAML."""
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        with open(output_path, "w", encoding="utf-8") as f:
            yaml.safe_dump(
                config.to_dict(), f, default_flow_style=False, indent=2, sort_keys=False
            )
        logger.info(f"Configuration saved to: {output_path}")


def load_config_from_path(config_path: str | Path | None = None) -> Config:
    """Load ``config_path`` merged over the defaults, or the defaults alone."""
    loader = ConfigLoader()
    if config_path is None:
        return loader.load_default_config()
    return loader.load_config(config_path)
