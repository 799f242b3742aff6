"""
Unit tests for error records.
"""

import logging

from ...exceptions import (
    ConfigurationError,
    DegenerateComponentError,
    MissingValueError,
    NotPositiveDefiniteError,
)
from ..error_recorder import ErrorRecorder


class TestErrorRecorder:
    """Test classification and logging."""

    def test_data_error(self):
        record = ErrorRecorder().classify(
            MissingValueError("missing value", row=3, col="x"), "load"
        )

        assert record["error_type"] == "MissingValueError"
        assert record["category"] == "data"
        assert record["stage"] == "data"
        assert record["details"] == {"row": 3, "col": "x"}
        assert record["recoverable"] is True
        assert record["context"] == "load"
        assert record["suggestions"]

    def test_categories(self):
        recorder = ErrorRecorder()

        assert recorder.classify(DegenerateComponentError("x"), "fit")["category"] == (
            "estimation"
        )
        assert recorder.classify(NotPositiveDefiniteError("x"), "fit")["category"] == (
            "numerics"
        )
        assert recorder.classify(
            ConfigurationError("x", config_path="a.yaml"), "cli"
        )["details"] == {"config_path": "a.yaml"}

    def test_unexpected(self, caplog):
        recorder = ErrorRecorder()

        with caplog.at_level(logging.CRITICAL):
            record = recorder.record(RuntimeError("boom"), "run")

        assert record["category"] == "unexpected"
        assert record["stage"] is None
        assert record["recoverable"] is False
        assert "boom" in caplog.text

    def test_stack_trace_in_debug_mode(self):
        try:
            raise ValueError("bad")
        except ValueError as e:
            record = ErrorRecorder(debug_mode=True).record(e, "run")

        assert "ValueError: bad" in record["stack_trace"]

