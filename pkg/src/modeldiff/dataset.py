"""Canonical in-memory model of instances, features, ground truth and model outputs.

A :class:`Dataset` is columnar and immutable after construction: hot paths
(slicing, aggregation) operate on numpy arrays indexed by dense instance ids
``0..N-1`` and integer class/model ids. Display labels are stored once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

PROB_SUM_TOL = 1e-6

NUMERIC = "numeric"
CATEGORICAL = "categorical"
BOOLEAN = "boolean"
SPARSE_COUNT = "sparse-count"

FEATURE_KINDS = (NUMERIC, CATEGORICAL, BOOLEAN, SPARSE_COUNT)


class TaskMismatchError(TypeError):
    """An operation for one task type was applied to a dataset of the other."""


class Correctness(enum.Enum):
    """Correctness of one model's prediction relative to one reference class."""

    TP = "TP"
    TN = "TN"
    FP = "FP"
    FN = "FN"


@dataclass(frozen=True)
class FeatureColumn:
    """One per-instance feature column.

    ``values`` holds one entry per instance:

    - ``numeric``: float array
    - ``categorical``: list of hashable category values
    - ``boolean``: bool array
    - ``sparse-count``: list of ``{token: count}`` dicts (absent token = 0)
    """

    name: str
    kind: str
    values: Any

    def __post_init__(self) -> None:
        if self.kind not in FEATURE_KINDS:
            raise ValueError(f"unknown feature kind {self.kind!r} for column {self.name!r}")
        if self.kind == NUMERIC:
            arr = np.asarray(self.values, dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, "values", arr)
        elif self.kind == BOOLEAN:
            arr = np.asarray(self.values, dtype=bool)
            arr.setflags(write=False)
            object.__setattr__(self, "values", arr)
        else:
            object.__setattr__(self, "values", list(self.values))

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureColumn):
            return NotImplemented
        if self.name != other.name or self.kind != other.kind:
            return False
        if self.kind in (NUMERIC, BOOLEAN):
            return bool(np.array_equal(self.values, other.values))
        return list(self.values) == list(other.values)


@dataclass(eq=False)
class Dataset:
    """Immutable columnar store of instances, features, ground truth and model outputs.

    For classification, ``ground_truth`` is an int array of class ids and each
    entry of ``predictions`` is an ``(N, K)`` probability matrix. For
    regression, ``ground_truth`` and each prediction entry are ``(N,)`` float
    arrays in task units.
    """

    task: str  # "classification" | "regression"
    model_labels: list[str]
    predictions: list[np.ndarray]
    ground_truth: np.ndarray
    class_labels: list[str] | None = None
    features: list[FeatureColumn] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.task not in ("classification", "regression"):
            raise ValueError(f"unknown task {self.task!r}")
        gt_dtype = np.int64 if self.task == "classification" else np.float64
        gt = np.asarray(self.ground_truth, dtype=gt_dtype)
        gt.setflags(write=False)
        self.ground_truth = gt
        preds = []
        for p in self.predictions:
            arr = np.asarray(p, dtype=np.float64)
            arr.setflags(write=False)
            preds.append(arr)
        self.predictions = preds
        # Predicted class ids are needed by every slicing op; cache them once.
        if self.task == "classification":
            self._predicted = [np.argmax(p, axis=1) if p.ndim == 2 and p.size else
                               np.zeros(len(gt), dtype=np.int64) for p in preds]
        else:
            self._predicted = []

    @property
    def n_instances(self) -> int:
        return int(self.ground_truth.shape[0])

    @property
    def n_models(self) -> int:
        return len(self.model_labels)

    @property
    def n_classes(self) -> int:
        if self.task != "classification":
            raise TaskMismatchError("class count is undefined for regression datasets")
        return len(self.class_labels or [])

    @property
    def is_classification(self) -> bool:
        return self.task == "classification"

    def predicted_classes(self, model: int) -> np.ndarray:
        """Argmax class id per instance for one model (ties: lowest class id)."""
        if self.task != "classification":
            raise TaskMismatchError("predicted classes are undefined for regression datasets")
        return self._predicted[model]

    def model_index(self, label: str) -> int:
        try:
            return self.model_labels.index(label)
        except ValueError:
            raise KeyError(f"unknown model label {label!r}") from None

    def class_index(self, label: str) -> int:
        if not self.is_classification or self.class_labels is None:
            raise TaskMismatchError("class labels are undefined for regression datasets")
        try:
            return self.class_labels.index(label)
        except ValueError:
            raise KeyError(f"unknown class label {label!r}") from None

    def feature(self, name: str) -> FeatureColumn:
        for col in self.features:
            if col.name == name:
                return col
        raise KeyError(f"unknown feature {name!r}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.task == other.task
            and self.model_labels == other.model_labels
            and self.class_labels == other.class_labels
            and np.array_equal(self.ground_truth, other.ground_truth)
            and len(self.predictions) == len(other.predictions)
            and all(np.array_equal(a, b) for a, b in zip(self.predictions, other.predictions))
            and self.features == other.features
        )


def predicted_class(scores: Sequence[float] | np.ndarray) -> int:
    """Class id with the highest probability; ties resolve to the lowest id."""
    arr = np.asarray(scores, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("prediction vector must be a nonempty 1-D sequence")
    return int(np.argmax(arr))


def correctness(d: Dataset, instance: int, model: int, class_id: int) -> Correctness:
    """TP/TN/FP/FN of one model's prediction on one instance, relative to ``class_id``.

    TP: truth and prediction are both the class. FN: truth is the class,
    prediction is not. FP: prediction is the class, truth is not. TN: neither.
    """
    if d.task != "classification":
        raise TaskMismatchError("correctness categories require a classification dataset")
    truth = int(d.ground_truth[instance]) == class_id
    pred = int(d.predicted_classes(model)[instance]) == class_id
    if truth and pred:
        return Correctness.TP
    if truth:
        return Correctness.FN
    if pred:
        return Correctness.FP
    return Correctness.TN


def validate_dataset(d: Dataset) -> list[str]:
    """Check every dataset invariant; return one message per violation.

    An empty report means the dataset is well-formed. Messages carry the
    instance/model/feature locus so callers can surface them directly.
    Probability rows that do not sum to 1 within ``PROB_SUM_TOL`` are
    reported rather than silently renormalized: a bad sum usually means an
    upstream bug worth seeing.
    """
    report: list[str] = []
    n = d.n_instances

    if len(d.predictions) != len(d.model_labels):
        report.append(
            f"{len(d.model_labels)} model labels but {len(d.predictions)} prediction arrays"
        )
    if len(set(d.model_labels)) != len(d.model_labels):
        report.append("model labels are not unique")

    if d.task == "classification":
        if d.class_labels is None or len(d.class_labels) < 2:
            report.append("classification dataset needs at least 2 class labels")
        k = len(d.class_labels or [])
        if k and (np.any(d.ground_truth < 0) or np.any(d.ground_truth >= k)):
            bad = np.flatnonzero((d.ground_truth < 0) | (d.ground_truth >= k))
            report.append(f"ground-truth class id out of range at instances {bad.tolist()[:5]}")
        for m, (label, p) in enumerate(zip(d.model_labels, d.predictions)):
            if p.shape != (n, k):
                report.append(f"model {label}: prediction shape {p.shape} != ({n}, {k})")
                continue
            if not np.all(np.isfinite(p)):
                i = int(np.flatnonzero(~np.isfinite(p).all(axis=1))[0])
                report.append(f"model {label} instance {i}: non-finite probability")
            if np.any(p < 0) or np.any(p > 1):
                i = int(np.flatnonzero(((p < 0) | (p > 1)).any(axis=1))[0])
                report.append(f"model {label} instance {i}: probability outside [0, 1]")
            sums = p.sum(axis=1)
            bad_rows = np.flatnonzero(np.abs(sums - 1.0) > PROB_SUM_TOL)
            for i in bad_rows[:5]:
                report.append(
                    f"model {label} instance {int(i)}: probabilities sum to {sums[i]:.6g}"
                )
    else:
        if d.class_labels is not None:
            report.append("regression dataset must not carry class labels")
        if not np.all(np.isfinite(d.ground_truth)):
            i = int(np.flatnonzero(~np.isfinite(d.ground_truth))[0])
            report.append(f"ground truth instance {i}: non-finite value")
        for label, p in zip(d.model_labels, d.predictions):
            if p.shape != (n,):
                report.append(f"model {label}: prediction shape {p.shape} != ({n},)")
                continue
            if not np.all(np.isfinite(p)):
                i = int(np.flatnonzero(~np.isfinite(p))[0])
                report.append(f"model {label} instance {i}: non-finite predicted value")

    for col in d.features:
        if len(col) != n:
            report.append(f"feature {col.name}: {len(col)} values for {n} instances")
            continue
        if col.kind == NUMERIC and not np.all(np.isfinite(col.values)):
            i = int(np.flatnonzero(~np.isfinite(col.values))[0])
            report.append(f"feature {col.name} instance {i}: non-finite value")
        if col.kind == SPARSE_COUNT:
            for i, counts in enumerate(col.values):
                if any(v < 0 for v in counts.values()):
                    report.append(f"feature {col.name} instance {i}: negative token count")
                    break
    return report
