"""
Error classification for clustering runs.

Turns exceptions into machine-readable records that the runner embeds in
report.json before exiting with code 1.
"""

import logging
import traceback
from datetime import datetime
from typing import Any

from ..exceptions import (
    ConfigurationError,
    DataError,
    EstimationError,
    NumericsError,
    ParameterError,
    SkewMixError,
)

logger = logging.getLogger(__name__)

_CATEGORIES: list[tuple[type[SkewMixError], str, bool]] = [
    (DataError, "data", True),
    (ConfigurationError, "configuration", True),
    (EstimationError, "estimation", True),
    (ParameterError, "parameters", False),
    (NumericsError, "numerics", False),
]

_SUGGESTIONS = {
    "data": [
        "Check that every feature cell is a finite number",
        "Check the label and exclusion column names",
    ],
    "configuration": [
        "Run 'skewmix validate-config' on the configuration file",
        "Compare against the bundled default configuration",
    ],
    "estimation": [
        "Retry with a different seed or initialization strategy",
        "Try fewer components",
    ],
    "parameters": ["Check the parameter values passed to the model"],
    "numerics": ["Check the data scale; extreme values can overflow"],
    "unexpected": ["Please report this issue with the error details"],
}


class ErrorRecorder:
    """
    Classifies and logs errors for a run.

    Args:
        debug_mode: Keep stack traces in the records
        logger: Optional custom logger instance
    """

    def __init__(
        self, debug_mode: bool = False, logger: logging.Logger | None = None
    ) -> None:
        self.debug_mode = debug_mode
        self.logger = logger or logging.getLogger(__name__)

    def classify(self, error: BaseException, context: str) -> dict[str, Any]:
        """
        Build the record for ``error``.

        Returns:
            Dictionary with error_type, category, stage, message, details,
            recoverable, suggestions, context and timestamp
        """
        category, recoverable = "unexpected", False
        for error_class, name, can_recover in _CATEGORIES:
            if isinstance(error, error_class):
                category, recoverable = name, can_recover
                break
        if isinstance(error, SkewMixError):
            stage = error.stage
            details = dict(error.details)
        else:
            stage, details = None, {}
        return {
            "error_type": type(error).__name__,
            "category": category,
            "stage": stage,
            "message": str(error),
            "details": details,
            "recoverable": recoverable,
            "suggestions": list(_SUGGESTIONS[category]),
            "context": context,
            "timestamp": datetime.now().isoformat(),
        }

    def record(self, error: BaseException, context: str) -> dict[str, Any]:
        """Classify and log an error; returns its record."""
        info = self.classify(error, context)
        message = f"[{context}] {info['message']}"
        if info["category"] == "unexpected":
            self.logger.critical(message)
        else:
            self.logger.error(message)
        if self.debug_mode:
            info["stack_trace"] = "".join(
                traceback.format_exception(type(error), error, error.__traceback__)
            )
            self.logger.debug(f"Stack trace: {info['stack_trace']}")
        return info

