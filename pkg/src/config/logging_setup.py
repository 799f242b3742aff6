"""
Logging setup from a LoggingConfig.
"""

import logging
import logging.handlers
from pathlib import Path

from .config_model import LoggingConfig

_HANDLER_NAME = "skewmix"


def configure_logging(config: LoggingConfig, level: str | None = None) -> None:
    """
    Install the console handler, and a rotating file handler when
    ``config.file_path`` is set, on the root logger.

    Handlers installed by an earlier call are replaced. ``level`` overrides
    ``config.level``.
    """
    root = logging.getLogger()
    for handler in list(root.handlers):
        if handler.get_name() and handler.get_name().startswith(_HANDLER_NAME):
            root.removeHandler(handler)
            handler.close()

    formatter = logging.Formatter(config.format)
    console = logging.StreamHandler()
    console.set_name(f"{_HANDLER_NAME}.console")
    console.setFormatter(formatter)
    root.addHandler(console)

    if config.file_path:
        path = Path(config.file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        rotating = logging.handlers.RotatingFileHandler(
            path,
            maxBytes=config.max_file_size,
            backupCount=config.backup_count,
            encoding="utf-8",
        )
        rotating.set_name(f"{_HANDLER_NAME}.file")
        rotating.setFormatter(formatter)
        root.addHandler(rotating)

    root.setLevel((level or config.level).upper())
