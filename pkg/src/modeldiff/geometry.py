"""Density clustering and concave-hull contouring for crowded cells.

When a cell holds too many points to read as a scatterplot, each
(quadrant, color) group is clustered by density and every cluster is drawn
as a single concave outline, with the leftover sparse points kept for
individual rendering. Clusters never cross a quadrant or color boundary.

All routines are deterministic: ties break on ascending instance id or
lexicographic coordinates, never on hash or iteration incidentals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


class DegeneratePolygonError(ValueError):
    """Polygon has fewer than 3 vertices or encloses no area."""


@dataclass(frozen=True)
class GeometryConfig:
    """Tuning for cluster detection and hull tightness.

    ``eps`` is a fraction of the cell's axis span so the same config serves
    probability cells (span 2) and residual cells (span in task units).
    """

    eps: float = 0.05
    min_pts: int = 5
    hull_k: int = 3

    def __post_init__(self) -> None:
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.min_pts < 3:
            raise ValueError("min_pts must be at least 3")
        if self.hull_k < 3:
            raise ValueError("hull_k must be at least 3")


@dataclass(frozen=True)
class Contour:
    """Closed outline of one dense cluster inside one quadrant."""

    color_class: str
    quadrant: int
    polygon: tuple[tuple[float, float], ...]
    member_count: int
    degenerate: bool = False


# ---------------------------------------------------------------------------
# point-in-polygon (even-odd rule, edges inclusive)


def _on_segment(p: tuple[float, float], a: tuple[float, float], b: tuple[float, float]) -> bool:
    cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
    if cross != 0.0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def point_in_polygon(p: tuple[float, float], polygon: Sequence[tuple[float, float]]) -> bool:
    """Even-odd containment test; points exactly on an edge count as inside."""
    n = len(polygon)
    if n < 3:
        raise DegeneratePolygonError("polygon needs at least 3 vertices")
    px, py = p
    inside = False
    for i in range(n):
        a = polygon[i]
        b = polygon[(i + 1) % n]
        if _on_segment((px, py), a, b):
            return True
        # Half-open rule on y so shared vertices are counted once.
        if (a[1] <= py) != (b[1] <= py):
            x_cross = a[0] + (py - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if px < x_cross:
                inside = not inside
    return inside


def polygon_area(polygon: Sequence[tuple[float, float]]) -> float:
    """Unsigned shoelace area of a closed polygon."""
    n = len(polygon)
    acc = 0.0
    for i in range(n):
        x0, y0 = polygon[i]
        x1, y1 = polygon[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return abs(acc) / 2.0


def _segments_cross(
    p1: tuple[float, float],
    p2: tuple[float, float],
    q1: tuple[float, float],
    q2: tuple[float, float],
) -> bool:
    """True when the open segments intersect (shared endpoints do not count)."""

    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return 0 if v == 0 else (1 if v > 0 else -1)

    if p1 in (q1, q2) or p2 in (q1, q2):
        return False
    o1 = orient(p1, p2, q1)
    o2 = orient(p1, p2, q2)
    o3 = orient(q1, q2, p1)
    o4 = orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    # Collinear overlap counts as crossing.
    for a, b, c, o in ((p1, p2, q1, o1), (p1, p2, q2, o2), (q1, q2, p1, o3), (q1, q2, p2, o4)):
        if o == 0 and _on_segment(c, a, b):
            return True
    return False


# ---------------------------------------------------------------------------
# density clustering


def cluster_points(points: Sequence, cfg: GeometryConfig, span: float = 2.0) -> tuple[list[list], list]:
    """Density-based clusters plus the noise points that belong to none.

    A point is a core point when at least ``min_pts`` points (itself
    included) sit within ``eps * span``. Clusters are the connected regions
    of core points plus the border points they reach; border points join the
    first cluster that claims them. Iteration runs in ascending instance-id
    order, so results are reproducible.
    """
    n = len(points)
    if n == 0:
        return [], []
    order = sorted(range(n), key=lambda i: points[i].instance)
    xy = np.array([(points[i].x, points[i].y) for i in order], dtype=np.float64)
    eps = cfg.eps * span
    d2 = ((xy[:, None, :] - xy[None, :, :]) ** 2).sum(axis=2)
    neighbor = d2 <= eps * eps
    degree = neighbor.sum(axis=1)
    core = degree >= cfg.min_pts

    label = np.full(n, -1, dtype=np.int64)
    cluster_id = 0
    for seed in range(n):
        if label[seed] != -1 or not core[seed]:
            continue
        frontier = [seed]
        label[seed] = cluster_id
        while frontier:
            cur = frontier.pop(0)
            if not core[cur]:
                continue
            for nb in np.flatnonzero(neighbor[cur]).tolist():
                if label[nb] == -1:
                    label[nb] = cluster_id
                    frontier.append(nb)
        cluster_id += 1

    clusters = [[] for _ in range(cluster_id)]
    noise = []
    for idx, lab in enumerate(label.tolist()):
        p = points[order[idx]]
        if lab == -1:
            noise.append(p)
        else:
            clusters[lab].append(p)
    return clusters, noise


# ---------------------------------------------------------------------------
# concave hull


def _convex_hull(coords: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Monotone-chain convex hull, counterclockwise, no collinear vertices."""
    pts = sorted(set(coords))
    if len(pts) < 3:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _closure_ok(hull: list[tuple[float, float]]) -> bool:
    """Check the implicit closing edge against all non-adjacent hull edges."""
    closing = (hull[-1], hull[0])
    for j in range(1, len(hull) - 2):
        if _segments_cross(closing[0], closing[1], hull[j], hull[j + 1]):
            return False
    return True


def _knn_walk(coords: list[tuple[float, float]], k: int) -> list[tuple[float, float]] | None:
    """One attempt at a k-nearest-neighbor boundary walk; None when it jams."""
    n = len(coords)
    k = min(k, n - 1)
    start = min(coords, key=lambda c: (c[1], c[0]))
    hull = [start]
    current = start
    prev_angle = 0.0
    remaining = set(coords)
    remaining.discard(start)
    step = 2
    while True:
        if step == 5:
            remaining.add(start)
        if not remaining:
            # Every point got consumed before the walk returned home; the
            # polygon closes implicitly if the final edge stays crossing-free.
            return hull if len(hull) >= 3 and _closure_ok(hull) else None
        candidates = sorted(remaining, key=lambda c: ((c[0] - current[0]) ** 2 + (c[1] - current[1]) ** 2, c))[:k]

        def turn(c: tuple[float, float]) -> float:
            # Clockwise angle from the reverse of the incoming edge, in
            # (0, 2*pi]: a candidate exactly behind is the sharpest turn.
            ang = np.arctan2(c[1] - current[1], c[0] - current[0])
            t = float((prev_angle - ang) % (2.0 * np.pi))
            return t if t > 0.0 else 2.0 * np.pi

        candidates.sort(key=lambda c: (-turn(c), c))
        chosen = None
        for cand in candidates:
            closing = cand == start
            crosses = False
            last = len(hull) - 1 - (1 if closing else 0)
            for j in range(last):
                if _segments_cross(current, cand, hull[j], hull[j + 1]):
                    crosses = True
                    break
            if not crosses:
                chosen = cand
                break
        if chosen is None:
            return None
        if chosen == start:
            return hull
        hull.append(chosen)
        remaining.discard(chosen)
        prev_angle = float(np.arctan2(current[1] - chosen[1], current[0] - chosen[0]))
        current = chosen
        step += 1
        if step > 4 * n + 8:
            return None


def concave_hull(
    points: Sequence, cfg: GeometryConfig | None = None, k: int | None = None
) -> tuple[tuple[tuple[float, float], ...], bool]:
    """Concave outline of a cluster; returns ``(polygon, degenerate)``.

    Walks the boundary from the lowest point, always taking the sharpest
    available right-hand turn among the ``k`` nearest unvisited points and
    rejecting self-intersections. Whenever some cluster point ends up
    outside, the walk retries with a larger neighborhood; ``k`` reaching the
    cluster size degrades to the convex hull, which always contains
    everything. Collinear clusters come back as their extreme segment with
    the degenerate flag set.
    """
    coords = [(float(p.x), float(p.y)) for p in points]
    if len(coords) < 3:
        raise ValueError("concave hull needs at least 3 points")
    unique = sorted(set(coords))
    convex = _convex_hull(unique)
    if len(convex) < 3 or polygon_area(convex) == 0.0:
        # All positions coincide or are collinear: emit the extreme segment.
        if len(unique) == 1:
            return (unique[0], unique[0]), True
        return (unique[0], unique[-1]), True

    requested = max(3, k if k is not None else (cfg.hull_k if cfg is not None else 3))

    def feasible(poly):
        if poly is None or len(poly) < 3 or polygon_area(poly) == 0.0:
            return False
        return all(point_in_polygon(c, poly) for c in unique)

    # The knob is monotone: a larger k never tightens the outline. Raw
    # single-k walks can shrink slightly as k grows, so scan every
    # neighborhood size up to the requested one and keep the loosest
    # feasible walk (first wins ties, for determinism).
    best: tuple[float, list[tuple[float, float]]] | None = None
    for kk in range(3, min(requested, len(unique) - 1) + 1):
        poly = _knn_walk(unique, kk)
        if feasible(poly):
            area = polygon_area(poly)
            if best is None or area > best[0]:
                best = (area, poly)
    if best is not None:
        return tuple(best[1]), False
    for kk in range(requested + 1, len(unique)):
        poly = _knn_walk(unique, kk)
        if feasible(poly):
            return tuple(poly), False
    return tuple(convex), False


def cell_contours(
    points: Sequence, cfg: GeometryConfig | None = None, span: float = 2.0
) -> tuple[list[Contour], list]:
    """Contours for every dense (quadrant, color) cluster, plus the noise points.

    Output order is fixed: quadrant 1..4, then color name, then cluster
    discovery order, so identical inputs serialize identically.
    """
    cfg = cfg or GeometryConfig()
    groups: dict[tuple[int, str], list] = {}
    for p in points:
        groups.setdefault((p.quadrant, p.color), []).append(p)
    contours: list[Contour] = []
    noise: list = []
    for (quadrant, color) in sorted(groups):
        members = groups[(quadrant, color)]
        clusters, group_noise = cluster_points(members, cfg, span=span)
        noise.extend(group_noise)
        for cluster in clusters:
            polygon, degenerate = concave_hull(cluster, cfg)
            contours.append(
                Contour(
                    color_class=color,
                    quadrant=quadrant,
                    polygon=polygon,
                    member_count=len(cluster),
                    degenerate=degenerate,
                )
            )
    noise.sort(key=lambda p: p.instance)
    return contours, noise
