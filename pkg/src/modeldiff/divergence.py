"""Feature aggregation, smoothed distributions and KL divergence over subsets.

This is the engine behind the feature interpretation table: aggregate feature
values over an instance subset, turn aggregates into additively smoothed
probability distributions on a shared support, and score how surprising one
subset's distribution is under another's with KL divergence (natural log,
reported in nats).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from modeldiff.dataset import (
    BOOLEAN,
    CATEGORICAL,
    NUMERIC,
    SPARSE_COUNT,
    Dataset,
    FeatureColumn,
    TaskMismatchError,
)

SORT_KEYS = ("C", "G", "N")


@dataclass(frozen=True)
class DivergenceConfig:
    """Smoothing and binning knobs shared by every divergence computation."""

    smoothing_alpha: float = 1e-6
    numeric_bins: int = 20

    def __post_init__(self) -> None:
        if self.smoothing_alpha <= 0:
            raise ValueError("smoothing_alpha must be positive")
        if self.numeric_bins < 2:
            raise ValueError("numeric_bins must be at least 2")


@dataclass(frozen=True)
class AggregateVector:
    """Aggregated feature values over one instance subset.

    ``values`` maps tokens (sparse-count), categories (categorical) or the
    column name itself (numeric, boolean) to the aggregate. ``kind`` records
    how the numbers were produced so bars are comparable: ``sum`` for
    sparse counts, ``mean`` for numerics, ``count`` for booleans and
    categoricals. Missing keys read as 0.
    """

    kind: str
    values: dict
    empty: bool = False

    def get(self, key, default: float = 0.0) -> float:
        return self.values.get(key, default)


@dataclass(frozen=True)
class FeatureDistribution:
    """Smoothed probability distribution over an ordered support."""

    support: tuple
    probs: np.ndarray
    smoothing_alpha: float

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=np.float64)
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        if len(self.support) != probs.shape[0]:
            raise ValueError("support and probabilities differ in length")
        if abs(float(probs.sum()) - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, not 1")


def aggregate(d: Dataset, subset: Iterable[int], column: FeatureColumn) -> AggregateVector:
    """Aggregate one feature over a subset of instance ids.

    Sparse-count columns sum token-wise, numeric columns take the mean,
    boolean columns count the trues, categorical columns count occurrences
    per category. An empty subset yields an all-zero vector with the empty
    flag set.
    """
    ids = sorted(set(subset))
    if ids and (ids[0] < 0 or ids[-1] >= d.n_instances):
        raise ValueError("subset contains instance ids outside the dataset")
    if not ids:
        return AggregateVector(kind=_agg_kind(column), values={}, empty=True)
    if column.kind == SPARSE_COUNT:
        acc: dict = {}
        for i in ids:
            for token, count in column.values[i].items():
                acc[token] = acc.get(token, 0.0) + float(count)
        return AggregateVector(kind="sum", values=acc)
    if column.kind == NUMERIC:
        mean = float(np.mean(column.values[ids]))
        return AggregateVector(kind="mean", values={column.name: mean})
    if column.kind == BOOLEAN:
        total = float(np.sum(column.values[ids]))
        return AggregateVector(kind="count", values={column.name: total})
    acc = {}
    for i in ids:
        v = column.values[i]
        acc[v] = acc.get(v, 0.0) + 1.0
    return AggregateVector(kind="count", values=acc)


def _agg_kind(column: FeatureColumn) -> str:
    if column.kind == SPARSE_COUNT:
        return "sum"
    if column.kind == NUMERIC:
        return "mean"
    return "count"


def to_distribution(
    agg: AggregateVector | Mapping, support: Sequence, cfg: DivergenceConfig | None = None
) -> FeatureDistribution:
    """Additively smoothed distribution of an aggregate over a fixed support.

    ``p_k = (v_k + alpha) / (sum(v) + alpha * |support|)``; smoothing keeps
    every probability strictly positive, so any two distributions on the
    same support have finite KL divergence. All-zero aggregates come out
    uniform.
    """
    cfg = cfg or DivergenceConfig()
    values = agg.values if isinstance(agg, AggregateVector) else dict(agg)
    if len(support) == 0:
        raise ValueError("support is empty")
    support_t = tuple(support)
    known = set(support_t)
    for key in values:
        if key not in known:
            raise ValueError(f"aggregate key {key!r} missing from support")
    counts = np.array([float(values.get(k, 0.0)) for k in support_t], dtype=np.float64)
    if np.any(counts < 0):
        raise ValueError("aggregate values must be non-negative for distributions")
    alpha = cfg.smoothing_alpha
    total = counts.sum() + alpha * len(support_t)
    probs = (counts + alpha) / total
    return FeatureDistribution(support=support_t, probs=probs, smoothing_alpha=alpha)


def kl_divergence(p: FeatureDistribution, q: FeatureDistribution) -> float:
    """``sum(p * ln(p / q))`` in nats; always finite on smoothed inputs.

    Tiny negative floating-point residue on near-identical inputs clamps
    to 0 so the mathematical non-negativity survives serialization.
    """
    if p.support != q.support:
        raise ValueError("distributions have different supports")
    value = float(np.sum(p.probs * np.log(p.probs / q.probs)))
    return max(value, 0.0)


def sparse_vocabulary(d: Dataset) -> tuple:
    """Sorted union of every token in every sparse-count column."""
    vocab: set = set()
    for col in d.features:
        if col.kind == SPARSE_COUNT:
            for counts in col.values:
                vocab.update(counts.keys())
    return tuple(sorted(vocab))


def _sparse_counts(d: Dataset, ids: Iterable[int]) -> dict:
    acc: dict = {}
    for col in d.features:
        if col.kind != SPARSE_COUNT:
            continue
        for i in ids:
            for token, count in col.values[i].items():
                acc[token] = acc.get(token, 0.0) + float(count)
    return acc


def column_divergence(
    d: Dataset,
    selection: Iterable[int],
    class_id: int,
    cfg: DivergenceConfig | None = None,
) -> float:
    """How surprising the selection's token distribution is under one class's.

    Computes ``KL(P_selection || P_class)`` over the dataset-wide sparse
    vocabulary, where the class distribution aggregates every instance whose
    ground truth is ``class_id``. Low values mean the selected instances
    look like that class.
    """
    if d.task != "classification":
        raise TaskMismatchError("column divergence requires a classification dataset")
    members = sorted(set(selection))
    if not members:
        raise ValueError("selection is empty")
    cfg = cfg or DivergenceConfig()
    vocab = sparse_vocabulary(d)
    class_ids = np.flatnonzero(d.ground_truth == class_id).tolist()
    p = to_distribution(_sparse_counts(d, members), vocab, cfg)
    q = to_distribution(_sparse_counts(d, class_ids), vocab, cfg)
    return kl_divergence(p, q)


def rank_features(
    table: Mapping[str, Mapping[str, float]],
    sort_keys: Sequence[str],
    top_k: int,
) -> list[str]:
    """Order feature rows by aggregate bars and truncate to ``top_k``.

    One key sorts descending by that bar; two keys sort descending by the
    absolute difference of the two bars, surfacing the most discriminative
    rows. Ties fall back to feature name. Keys are ``C`` (class bar),
    ``G`` (ground-truth-colored selection bar) and ``N`` (the rest of the
    selection).
    """
    keys = list(sort_keys)
    if not keys or len(keys) > 2:
        raise ValueError("sort_keys must name one or two of C, G, N")
    for key in keys:
        if key not in SORT_KEYS:
            raise ValueError(f"unknown sort key {key!r}")
    if top_k < 0:
        raise ValueError("top_k must be non-negative")

    def value(name: str) -> float:
        row = table[name]
        if len(keys) == 1:
            return float(row.get(keys[0], 0.0))
        return abs(float(row.get(keys[0], 0.0)) - float(row.get(keys[1], 0.0)))

    ordered = sorted(table, key=lambda name: (-value(name), name))
    return ordered[:top_k]


def histogram_support(
    column: FeatureColumn, values_a: Sequence, values_b: Sequence, cfg: DivergenceConfig
):
    """Shared histogram support for two value samples of one feature.

    Numeric features use ``cfg.numeric_bins`` equal-width bins over the
    combined min-max (a constant combined range collapses to a single bin);
    categorical and boolean features use their observed categories. Returns
    ``(support, bin_edges_or_None)``.
    """
    if column.kind == NUMERIC:
        combined = np.concatenate([np.asarray(values_a, dtype=float), np.asarray(values_b, dtype=float)])
        lo = float(combined.min())
        hi = float(combined.max())
        if lo == hi:
            return (0,), np.array([lo, hi])
        edges = np.linspace(lo, hi, cfg.numeric_bins + 1)
        return tuple(range(cfg.numeric_bins)), edges
    cats = sorted(set(values_a) | set(values_b), key=lambda v: (str(type(v)), str(v)))
    return tuple(cats), None


def histogram_counts(values: Sequence, support: tuple, edges: np.ndarray | None) -> dict:
    """Raw occurrence counts of ``values`` on a support from :func:`histogram_support`."""
    if edges is None:
        acc: dict = {}
        for v in values:
            acc[v] = acc.get(v, 0.0) + 1.0
        return acc
    n_bins = len(support)
    if n_bins == 1:
        return {0: float(len(values))}
    arr = np.asarray(values, dtype=float)
    idx = np.searchsorted(edges, arr, side="right") - 1
    idx = np.clip(idx, 0, n_bins - 1)
    counts = np.bincount(idx, minlength=n_bins)
    return {i: float(c) for i, c in enumerate(counts) if c}


def _column_values(column: FeatureColumn, ids: list[int]):
    if column.kind == NUMERIC:
        return column.values[ids]
    if column.kind == BOOLEAN:
        return [bool(v) for v in np.asarray(column.values)[ids]]
    if column.kind == CATEGORICAL:
        return [column.values[i] for i in ids]
    raise ValueError(f"feature kind {column.kind!r} has no per-instance scalar value")


def subset_feature_divergence(
    d: Dataset,
    subset_a: Iterable[int],
    subset_b: Iterable[int],
    feature: str | FeatureColumn,
    cfg: DivergenceConfig | None = None,
) -> float:
    """KL divergence between one feature's value distributions in two subsets.

    Histograms both subsets on a shared support, smooths, and returns
    ``KL(P_a || P_b)``. Sparse-count columns compare token-sum distributions
    over the union vocabulary of the two subsets.
    """
    cfg = cfg or DivergenceConfig()
    ids_a = sorted(set(subset_a))
    ids_b = sorted(set(subset_b))
    if not ids_a or not ids_b:
        raise ValueError("both subsets must be nonempty")
    column = d.feature(feature) if isinstance(feature, str) else feature
    if column.kind == SPARSE_COUNT:
        agg_a = aggregate(d, ids_a, column).values
        agg_b = aggregate(d, ids_b, column).values
        vocab = tuple(sorted(set(agg_a) | set(agg_b)))
        if not vocab:
            return 0.0
        p = to_distribution(agg_a, vocab, cfg)
        q = to_distribution(agg_b, vocab, cfg)
        return kl_divergence(p, q)
    values_a = _column_values(column, ids_a)
    values_b = _column_values(column, ids_b)
    support, edges = histogram_support(column, values_a, values_b, cfg)
    if len(support) == 1:
        return 0.0
    p = to_distribution(histogram_counts(values_a, support, edges), support, cfg)
    q = to_distribution(histogram_counts(values_b, support, edges), support, cfg)
    return kl_divergence(p, q)
