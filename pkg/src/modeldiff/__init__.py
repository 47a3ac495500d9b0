"""Model-agnostic workbench for comparing and diagnosing ML models.

Works purely from model inputs and outputs: slices instances by pair-wise
correctness and confidence, explains instance subsets through feature
distribution divergence, and emits count-difference feature encoders for
model refinement.
"""

from modeldiff.dataset import (
    Correctness,
    Dataset,
    FeatureColumn,
    TaskMismatchError,
    correctness,
    predicted_class,
    validate_dataset,
)

__all__ = [
    "Correctness",
    "Dataset",
    "FeatureColumn",
    "TaskMismatchError",
    "correctness",
    "predicted_class",
    "validate_dataset",
]

__version__ = "0.1.0"
