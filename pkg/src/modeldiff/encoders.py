"""Model-pair complementarity scores and count-difference feature encoders.

Complementarity reads a cell's quadrant tally: points in Q2/Q4 are
disagreements, Q1/Q3 agreements, and ``(disagree - agree) / total`` lands in
[-1, 1] with +1 for maximally complementary models (prime ensemble
candidates).

Feature encoders capture where two instance subsets differ: each encoder
maps a binned feature value to the raw count difference between the subsets
and defaults to 0 on anything unseen. Applied to a dataset they add one
numeric ``enc_<feature>`` column per encoder, ready for a residual learner.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from modeldiff.dataset import (
    BOOLEAN,
    CATEGORICAL,
    NUMERIC,
    Dataset,
    FeatureColumn,
)
from modeldiff.divergence import (
    DivergenceConfig,
    _column_values,
    histogram_counts,
    histogram_support,
    subset_feature_divergence,
)
from modeldiff.slicing import (
    CellSpec,
    QuadrantCounts,
    cell_points,
    quadrant_counts,
    regression_points,
)

SCALAR_KINDS = (NUMERIC, CATEGORICAL, BOOLEAN)


@dataclass(frozen=True)
class ComplementarityScore:
    value: float
    counts: QuadrantCounts


@dataclass(frozen=True)
class FeatureEncoder:
    """Per-feature map from binned value to subset count difference.

    ``bins`` is the category tuple for categorical/boolean features or the
    bin-edge array for numeric ones (mapping keys are then bin indices).
    Values outside every bin encode to the default 0.
    """

    feature: str
    kind: str
    bins: tuple
    mapping: dict
    edges: np.ndarray | None = None

    def encode(self, value) -> float:
        if self.edges is None:
            return float(self.mapping.get(value, 0.0))
        lo = float(self.edges[0])
        hi = float(self.edges[-1])
        v = float(value)
        if not lo <= v <= hi:
            return 0.0
        if len(self.bins) == 1:
            return float(self.mapping.get(0, 0.0))
        idx = int(np.searchsorted(self.edges, v, side="right")) - 1
        idx = min(max(idx, 0), len(self.bins) - 1)
        return float(self.mapping.get(idx, 0.0))

    def to_json_dict(self) -> dict:
        bins = [repr(float(e)) for e in self.edges] if self.edges is not None else [
            _json_key(b) for b in self.bins
        ]
        return {
            "feature": self.feature,
            "kind": self.kind,
            "bins": bins,
            "mapping": {_json_key(k): v for k, v in self.mapping.items()},
        }


def _json_key(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def complementarity(counts: QuadrantCounts) -> ComplementarityScore:
    """Normalized disagreement score ``(q2 + q4 - q1 - q3) / total`` in [-1, 1]."""
    total = counts.total
    if total == 0:
        raise ValueError("cell is empty; complementarity is undefined")
    value = (counts.q2 + counts.q4 - counts.q1 - counts.q3) / total
    return ComplementarityScore(value=value, counts=counts)


def complementarity_matrix(
    d: Dataset,
    column: int | tuple[str, object] | None = None,
    filter_mode: str = "ALL",
    mode: str = "confidence",
    correctness: str = "any",
) -> list[list[float | None]]:
    """Pairwise complementarity over every model pair; diagonal entries are None.

    Entry ``(i, j)`` scores the cell with model ``i`` on the x axis and
    model ``j`` on the y axis; the score is symmetric because swapping the
    axes swaps Q2 with Q4. Empty cells come back as None.
    """
    m = d.n_models
    if m < 2:
        raise ValueError("pairwise complementarity needs at least 2 models")
    if d.is_classification and not isinstance(column, int):
        raise ValueError("classification matrices need a class id column")
    matrix: list[list[float | None]] = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            if d.is_classification:
                spec = CellSpec(
                    x_model=i,
                    y_model=j,
                    column=int(column),  # type: ignore[arg-type]
                    filter_mode=filter_mode,
                    correctness=correctness,
                )
                counts = quadrant_counts(cell_points(d, spec, mode))
            else:
                counts = quadrant_counts(
                    regression_points(d, i, j, partition=column)  # type: ignore[arg-type]
                )
            matrix[i][j] = None if counts.total == 0 else complementarity(counts).value
    return matrix


def select_encodable_features(
    d: Dataset,
    subset_a: Iterable[int],
    subset_b: Iterable[int],
    threshold: float,
    cfg: DivergenceConfig | None = None,
) -> list[tuple[str, float]]:
    """Scalar features whose two-subset divergence reaches ``threshold``.

    Returns ``(name, divergence)`` pairs sorted by descending divergence
    (name breaks ties). Only numeric, categorical and boolean columns are
    candidates: encoders need a scalar value per instance, which sparse
    token columns do not have.
    """
    ids_a = sorted(set(subset_a))
    ids_b = sorted(set(subset_b))
    if not ids_a or not ids_b:
        raise ValueError("both subsets must be nonempty")
    if set(ids_a) & set(ids_b):
        raise ValueError("subsets must be disjoint")
    cfg = cfg or DivergenceConfig()
    scored = []
    for col in d.features:
        if col.kind not in SCALAR_KINDS:
            continue
        div = subset_feature_divergence(d, ids_a, ids_b, col, cfg)
        if div >= threshold:
            scored.append((col.name, div))
    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored


def build_encoder(
    d: Dataset,
    feature: str,
    subset_a: Iterable[int],
    subset_b: Iterable[int],
    cfg: DivergenceConfig | None = None,
) -> FeatureEncoder:
    """Encoder mapping each feature bin to ``count_a(bin) - count_b(bin)``.

    Counts are raw (unsmoothed, unnormalized) occurrence counts, and the
    binning is the same one the divergence ranking used, so selection and
    encoding agree on one discretization. Bins absent from both subsets
    encode to 0.
    """
    ids_a = sorted(set(subset_a))
    ids_b = sorted(set(subset_b))
    if not ids_a or not ids_b:
        raise ValueError("both subsets must be nonempty")
    cfg = cfg or DivergenceConfig()
    column = d.feature(feature)
    if column.kind not in SCALAR_KINDS:
        raise ValueError(f"feature {feature!r} has kind {column.kind}; encoders need scalar values")
    values_a = _column_values(column, ids_a)
    values_b = _column_values(column, ids_b)
    support, edges = histogram_support(column, values_a, values_b, cfg)
    counts_a = histogram_counts(values_a, support, edges)
    counts_b = histogram_counts(values_b, support, edges)
    mapping = {}
    for key in support:
        diff = counts_a.get(key, 0.0) - counts_b.get(key, 0.0)
        if diff:
            mapping[key] = diff
    return FeatureEncoder(
        feature=column.name,
        kind=column.kind,
        bins=support,
        mapping=mapping,
        edges=edges,
    )


def apply_encoders(d: Dataset, encoders: Iterable[FeatureEncoder]) -> list[FeatureColumn]:
    """Augmented feature table: original columns plus one ``enc_<name>`` per encoder."""
    encoders = list(encoders)
    for enc in encoders:
        d.feature(enc.feature)  # missing feature raises here
    augmented = list(d.features)
    for enc in encoders:
        column = d.feature(enc.feature)
        values = [enc.encode(v) for v in _column_values(column, list(range(d.n_instances)))]
        augmented.append(
            FeatureColumn(name=f"enc_{enc.feature}", kind=NUMERIC, values=values)
        )
    return augmented
