"""
YAML configuration for skewmix runs.
"""

from .config_loader import ConfigLoader, load_config_from_path
from .config_model import (
    Config,
    DataConfig,
    FitConfig,
    LoggingConfig,
    OutputConfig,
    RunConfig,
)
from .logging_setup import configure_logging

__all__ = [
    "Config",
    "ConfigLoader",
    "DataConfig",
    "FitConfig",
    "LoggingConfig",
    "OutputConfig",
    "RunConfig",
    "configure_logging",
    "load_config_from_path",
]
