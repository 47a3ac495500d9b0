"""Cell coordinates, quadrant membership, filter modes and selections.

A *cell* compares two models on one column (a class for classification, an
optional feature partition for regression). Every instance that survives the
cell's filters becomes a signed 2-D point:

- classification: ``|coord|`` is a probability and the sign says whether the
  axis model predicted the column class (positive) or some other class
  (negative);
- regression: the coordinate is the residual ``predicted - observed`` per
  axis model, so positive means over-prediction.

Quadrants Q1/Q3 hold instances the two models agree on, Q2/Q4 the
disagreements. A coordinate that is exactly 0 counts as the positive half so
no instance is ever dropped from the partition.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from modeldiff.dataset import Dataset, TaskMismatchError
from modeldiff.geometry import DegeneratePolygonError, point_in_polygon, polygon_area

CONFIDENCE = "confidence"
TARGET_SCORE = "target-score"
COORDINATE_MODES = (CONFIDENCE, TARGET_SCORE)

ALL = "ALL"
UNION = "UNION"
GT = "GT"
FILTER_MODES = (ALL, UNION, GT)

CORRECTNESS_FILTERS = (
    "any",
    "both-correct",
    "both-wrong",
    "x-correct-y-wrong",
    "x-wrong-y-correct",
)

BLUE = "blue"
RED = "red"


@dataclass(frozen=True)
class CellSpec:
    """One (model pair, column, filters) cell of the comparison matrix."""

    x_model: int
    y_model: int
    column: int
    filter_mode: str = ALL
    correctness: str = "any"

    def __post_init__(self) -> None:
        if self.x_model == self.y_model:
            raise ValueError("cell needs two distinct models")
        if self.filter_mode not in FILTER_MODES:
            raise ValueError(f"unknown filter mode {self.filter_mode!r}")
        if self.correctness not in CORRECTNESS_FILTERS:
            raise ValueError(f"unknown correctness filter {self.correctness!r}")


@dataclass(frozen=True, slots=True)
class CellPoint:
    """One instance rendered in a classification cell."""

    instance: int
    x: float
    y: float
    color: str  # blue: ground truth is the column class
    quadrant: int


@dataclass(frozen=True, slots=True)
class RegressionPoint:
    """One instance in a regression cell; coordinates are residuals."""

    instance: int
    epsilon_x: float
    epsilon_y: float
    quadrant: int

    @property
    def x(self) -> float:
        return self.epsilon_x

    @property
    def y(self) -> float:
        return self.epsilon_y

    @property
    def over_x(self) -> bool:
        return self.epsilon_x >= 0

    @property
    def over_y(self) -> bool:
        return self.epsilon_y >= 0

    @property
    def color(self) -> str:
        # Q1 = both models over-predict, Q3 = both under; the mixed quadrants
        # carry no single tag.
        if self.quadrant == 1:
            return "over"
        if self.quadrant == 3:
            return "under"
        return "split"


@dataclass(frozen=True)
class QuadrantCounts:
    q1: int
    q2: int
    q3: int
    q4: int

    @property
    def total(self) -> int:
        return self.q1 + self.q2 + self.q3 + self.q4

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.q1, self.q2, self.q3, self.q4)


@dataclass(frozen=True)
class QuadrantOrigin:
    quadrant: int


@dataclass(frozen=True)
class LassoOrigin:
    polygon: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class Selection:
    """A named instance subset picked from one cell (the symptom set)."""

    id: str
    cell: CellSpec | None
    members: tuple[int, ...]
    origin: QuadrantOrigin | LassoOrigin | None = None

    def with_id(self, sel_id: str) -> Selection:
        return replace(self, id=sel_id)


def _quadrant(x: float, y: float) -> int:
    # Exact zero lands on the positive half; note -0.0 >= 0 is True.
    if x >= 0:
        return 1 if y >= 0 else 4
    return 2 if y >= 0 else 3


def _correctness_mask(d: Dataset, spec: CellSpec) -> np.ndarray:
    gt = d.ground_truth
    x_ok = d.predicted_classes(spec.x_model) == gt
    y_ok = d.predicted_classes(spec.y_model) == gt
    if spec.correctness == "any":
        return np.ones(d.n_instances, dtype=bool)
    if spec.correctness == "both-correct":
        return x_ok & y_ok
    if spec.correctness == "both-wrong":
        return ~x_ok & ~y_ok
    if spec.correctness == "x-correct-y-wrong":
        return x_ok & ~y_ok
    return ~x_ok & y_ok


def filter_members(d: Dataset, spec: CellSpec) -> set[int]:
    """Instance ids visible in a cell under its filter mode and correctness filter.

    ALL keeps everything; UNION keeps instances where the ground truth or
    either model's prediction is the column class; GT keeps only instances
    whose ground truth is the column class. The optional correctness filter
    intersects with the mode.
    """
    if d.task != "classification":
        raise TaskMismatchError("filter modes require a classification dataset")
    c = spec.column
    if not 0 <= c < d.n_classes:
        raise ValueError(f"class id {c} out of range")
    gt = d.ground_truth
    if spec.filter_mode == ALL:
        mask = np.ones(d.n_instances, dtype=bool)
    elif spec.filter_mode == GT:
        mask = gt == c
    else:
        mask = (
            (gt == c)
            | (d.predicted_classes(spec.x_model) == c)
            | (d.predicted_classes(spec.y_model) == c)
        )
    mask &= _correctness_mask(d, spec)
    return set(np.flatnonzero(mask).tolist())


def _axis_coords(d: Dataset, model: int, column: int, mode: str, ids: np.ndarray) -> np.ndarray:
    scores = d.predictions[model]
    pred = d.predicted_classes(model)[ids]
    if mode == CONFIDENCE:
        mag = scores[ids, pred]
    else:
        mag = scores[ids, column]
    sign = np.where(pred == column, 1.0, -1.0)
    return sign * mag


def cell_points(d: Dataset, spec: CellSpec, mode: str = CONFIDENCE) -> list[CellPoint]:
    """Signed 2-D coordinates for every instance visible in a classification cell.

    In ``confidence`` mode the magnitude is the score of the axis model's own
    predicted class; in ``target-score`` mode it is the score of the column
    class. Either way the sign is positive exactly when the axis model
    predicted the column class, and the point is blue when the ground truth
    is the column class.
    """
    if d.task != "classification":
        raise TaskMismatchError("cell points require a classification dataset")
    if mode not in COORDINATE_MODES:
        raise ValueError(f"unknown coordinate mode {mode!r}")
    ids = np.array(sorted(filter_members(d, spec)), dtype=np.int64)
    if ids.size == 0:
        return []
    xs = _axis_coords(d, spec.x_model, spec.column, mode, ids)
    ys = _axis_coords(d, spec.y_model, spec.column, mode, ids)
    blue = d.ground_truth[ids] == spec.column
    points = []
    for i, x, y, b in zip(ids.tolist(), xs.tolist(), ys.tolist(), blue.tolist()):
        x = x if x != 0 else 0.0  # normalize -0.0 for stable serialization
        y = y if y != 0 else 0.0
        points.append(
            CellPoint(instance=i, x=x, y=y, color=BLUE if b else RED, quadrant=_quadrant(x, y))
        )
    return points


def regression_points(
    d: Dataset,
    x_model: int,
    y_model: int,
    partition: tuple[str, object] | None = None,
) -> list[RegressionPoint]:
    """Residuals ``predicted - observed`` per axis model, one point per instance.

    ``partition`` optionally restricts to instances whose feature ``name``
    equals ``value``, which is how regression matrices slice columns.
    """
    if d.task != "regression":
        raise TaskMismatchError("residual points require a regression dataset")
    if x_model == y_model:
        raise ValueError("cell needs two distinct models")
    eps_x = d.predictions[x_model] - d.ground_truth
    eps_y = d.predictions[y_model] - d.ground_truth
    if partition is None:
        ids = range(d.n_instances)
    else:
        name, value = partition
        col = d.feature(name)
        if col.kind == "sparse-count":
            raise ValueError(f"cannot partition on sparse-count feature {name!r}")
        if col.kind == "numeric":
            mask = np.asarray(col.values) == float(value)
            ids = np.flatnonzero(mask).tolist()
        else:
            ids = [i for i, v in enumerate(col.values) if v == value or str(v) == str(value)]
    points = []
    for i in ids:
        ex = float(eps_x[i])
        ey = float(eps_y[i])
        points.append(
            RegressionPoint(instance=int(i), epsilon_x=ex, epsilon_y=ey, quadrant=_quadrant(ex, ey))
        )
    return points


def quadrant_counts(points: Iterable[CellPoint | RegressionPoint]) -> QuadrantCounts:
    """Point tally per quadrant; the four counts always sum to ``len(points)``."""
    n = [0, 0, 0, 0]
    for p in points:
        n[p.quadrant - 1] += 1
    return QuadrantCounts(*n)


def select_quadrant(
    points: Sequence[CellPoint | RegressionPoint],
    quadrant: int,
    cell: CellSpec | None = None,
) -> Selection:
    """Selection of every visible instance whose point lies in one quadrant."""
    if quadrant not in (1, 2, 3, 4):
        raise ValueError(f"quadrant must be 1..4, got {quadrant}")
    members = tuple(sorted(p.instance for p in points if p.quadrant == quadrant))
    return Selection(id="", cell=cell, members=members, origin=QuadrantOrigin(quadrant))


def select_lasso(
    points: Sequence[CellPoint | RegressionPoint],
    polygon: Sequence[tuple[float, float]],
    cell: CellSpec | None = None,
) -> Selection:
    """Selection of every visible instance inside a closed polygon.

    Containment uses the even-odd rule with edges counting as inside.
    Raises :class:`DegeneratePolygonError` for polygons with fewer than three
    vertices or zero area.
    """
    verts = tuple((float(x), float(y)) for x, y in polygon)
    if len(verts) < 3:
        raise DegeneratePolygonError("lasso polygon needs at least 3 vertices")
    if polygon_area(verts) == 0.0:
        raise DegeneratePolygonError("lasso polygon has zero area")
    members = tuple(
        sorted(p.instance for p in points if point_in_polygon((p.x, p.y), verts))
    )
    return Selection(id="", cell=cell, members=members, origin=LassoOrigin(verts))


def highlight_tint(
    selection: Selection | Sequence[int],
    points: Sequence[CellPoint],
) -> dict[int, float]:
    """Blue fraction of the selected instances, per quadrant that holds any.

    Drives the quadrant background tint: 1.0 renders fully blue, 0.0 fully
    red, anything between interpolates.
    """
    members = set(selection.members if isinstance(selection, Selection) else selection)
    if not members:
        raise ValueError("selection is empty")
    tally: dict[int, list[int]] = {}
    for p in points:
        if p.instance in members:
            blue_total = tally.setdefault(p.quadrant, [0, 0])
            blue_total[0] += p.color == BLUE
            blue_total[1] += 1
    return {q: blue / total for q, (blue, total) in sorted(tally.items())}
