"""
Clustering front end: CSV ingestion, fitting runs, labels and scoring.
"""

from .artifacts import RunReport, read_labels_csv, read_model_json, write_model_json
from .dataset import Dataset, load_csv, write_csv
from .error_recorder import ErrorRecorder
from .runner import RunResult, run
from .scoring import assign_labels, misclassification_rate
from .synthetic import make_synthetic_dlbcl_like, synthetic_model

__all__ = [
    "Dataset",
    "ErrorRecorder",
    "RunReport",
    "RunResult",
    "assign_labels",
    "load_csv",
    "make_synthetic_dlbcl_like",
    "misclassification_rate",
    "read_labels_csv",
    "read_model_json",
    "run",
    "synthetic_model",
    "write_csv",
    "write_model_json",
]
