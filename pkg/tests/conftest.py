"""Shared fixtures.

The six-instance toy dataset below is small enough to reason about by hand;
every frozen expectation in the suite traces back to enumerating it
instance by instance. Classes A, B, C; ground truth [A, A, B, B, C, C].

Predicted classes work out to:

    M0: [A, B, B, A, C, B]   (confidence 0.7 0.6 0.8 0.5 0.7 0.4)
    M1: [A, A, B, B, C, A]   (confidence 0.9 0.6 0.7 0.7 0.4 0.5)
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from modeldiff.dataset import Dataset, FeatureColumn

M0_SCORES = [
    (0.7, 0.2, 0.1),
    (0.2, 0.6, 0.2),
    (0.1, 0.8, 0.1),
    (0.5, 0.3, 0.2),
    (0.1, 0.2, 0.7),
    (0.3, 0.4, 0.3),
]
M1_SCORES = [
    (0.9, 0.05, 0.05),
    (0.6, 0.3, 0.1),
    (0.2, 0.7, 0.1),
    (0.1, 0.7, 0.2),
    (0.3, 0.3, 0.4),
    (0.5, 0.2, 0.3),
]
GROUND_TRUTH = [0, 0, 1, 1, 2, 2]

TOKEN_COUNTS = [
    {"old": 2.0, "raven": 1.0},
    {"old": 1.0, "night": 1.0},
    {"sea": 2.0},
    {"old": 1.0, "sea": 1.0},
    {"night": 2.0, "moon": 1.0},
    {"moon": 1.0},
]
LENGTHS = [10.0, 12.0, 8.0, 9.0, 11.0, 7.0]
SOURCES = ["a", "a", "b", "b", "c", "c"]


def build_toy_dataset() -> Dataset:
    return Dataset(
        task="classification",
        model_labels=["M0", "M1"],
        predictions=[np.array(M0_SCORES), np.array(M1_SCORES)],
        ground_truth=np.array(GROUND_TRUTH),
        class_labels=["A", "B", "C"],
        features=[
            FeatureColumn(name="length", kind="numeric", values=LENGTHS),
            FeatureColumn(name="source", kind="categorical", values=list(SOURCES)),
            FeatureColumn(name="tokens", kind="sparse-count", values=[dict(t) for t in TOKEN_COUNTS]),
        ],
    )


def write_toy_bundle(directory: Path) -> Path:
    """Write the toy dataset as a loadable on-disk bundle; returns the manifest path."""
    directory.mkdir(parents=True, exist_ok=True)
    classes = ["A", "B", "C"]

    def csv_lines(header: list[str], rows: list[list[str]]) -> str:
        return "\n".join([",".join(header)] + [",".join(r) for r in rows]) + "\n"

    (directory / "ground_truth.csv").write_text(
        csv_lines(["label"], [[classes[c]] for c in GROUND_TRUTH]), encoding="utf-8"
    )
    for name, scores in (("m0.csv", M0_SCORES), ("m1.csv", M1_SCORES)):
        (directory / name).write_text(
            csv_lines(classes, [[repr(v) for v in row] for row in scores]), encoding="utf-8"
        )
    (directory / "features.csv").write_text(
        csv_lines(
            ["length", "source"],
            [[repr(LENGTHS[i]), SOURCES[i]] for i in range(6)],
        ),
        encoding="utf-8",
    )
    token_rows = []
    for i, counts in enumerate(TOKEN_COUNTS):
        for token in sorted(counts):
            token_rows.append([str(i), token, repr(counts[token])])
    (directory / "tokens.csv").write_text(
        csv_lines(["instance_id", "token", "value"], token_rows), encoding="utf-8"
    )
    manifest = {
        "task": "classification",
        "classes": classes,
        "models": [
            {"label": "M0", "predictions": "m0.csv"},
            {"label": "M1", "predictions": "m1.csv"},
        ],
        "ground_truth": "ground_truth.csv",
        "features": "features.csv",
        "sparse_features": {"tokens": "tokens.csv"},
    }
    path = directory / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2), encoding="utf-8")
    return path


@pytest.fixture
def toy_dataset() -> Dataset:
    return build_toy_dataset()


@pytest.fixture
def toy_bundle(tmp_path: Path) -> Path:
    return write_toy_bundle(tmp_path / "bundle")
