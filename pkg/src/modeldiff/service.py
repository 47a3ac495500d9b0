"""HTTP facade over one loaded dataset: cells, selections, divergences, encoders.

All endpoints live under ``/api/v1`` and speak the deterministic JSON of
:mod:`modeldiff.wire`. The server owns named sessions; everything else is a
pure read of the immutable dataset, so identical requests return
byte-identical bodies. Ids are sequential (``s1``, ``sel1``) to keep
recorded exchanges reproducible.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Request, Response

from modeldiff import divergence as dv
from modeldiff import encoders as enc
from modeldiff import geometry as geo
from modeldiff import slicing as sl
from modeldiff.dataset import (
    BOOLEAN,
    CATEGORICAL,
    NUMERIC,
    SPARSE_COUNT,
    Dataset,
    TaskMismatchError,
)
from modeldiff.wire import dumps_bytes

API = "/api/v1"


@dataclass
class Session:
    id: str
    coordinate_mode: str = sl.CONFIDENCE
    divergence_cfg: dv.DivergenceConfig = field(default_factory=dv.DivergenceConfig)
    geometry_cfg: geo.GeometryConfig = field(default_factory=geo.GeometryConfig)
    selections: dict[str, sl.Selection] = field(default_factory=dict)
    _next_selection: int = 1
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def add_selection(self, selection: sl.Selection) -> sl.Selection:
        with self.lock:
            sel_id = f"sel{self._next_selection}"
            self._next_selection += 1
            stored = selection.with_id(sel_id)
            self.selections[sel_id] = stored
            return stored


class SessionStore:
    def __init__(self, dataset: Dataset):
        self.dataset = dataset
        self._sessions: dict[str, Session] = {}
        self._next = 1
        self._lock = threading.Lock()

    def create(self, **overrides) -> Session:
        with self._lock:
            session = Session(id=f"s{self._next}", **overrides)
            self._next += 1
            self._sessions[session.id] = session
            return session

    def get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}") from None

    # Sessions live in memory; a snapshot is a single JSON file so a
    # desk-scale analysis can survive a server restart without a database.

    def snapshot(self, path) -> None:
        import json
        from pathlib import Path

        def origin_dict(origin):
            if isinstance(origin, sl.QuadrantOrigin):
                return {"type": "quadrant", "quadrant": origin.quadrant}
            if isinstance(origin, sl.LassoOrigin):
                return {"type": "lasso", "polygon": [list(v) for v in origin.polygon]}
            return None

        with self._lock:
            payload = {
                "next": self._next,
                "sessions": [
                    {
                        "id": s.id,
                        "coordinate_mode": s.coordinate_mode,
                        "divergence": {
                            "smoothing_alpha": s.divergence_cfg.smoothing_alpha,
                            "numeric_bins": s.divergence_cfg.numeric_bins,
                        },
                        "geometry": {
                            "eps": s.geometry_cfg.eps,
                            "min_pts": s.geometry_cfg.min_pts,
                            "hull_k": s.geometry_cfg.hull_k,
                        },
                        "next_selection": s._next_selection,
                        "selections": [
                            {
                                "id": sel.id,
                                "cell": None
                                if sel.cell is None
                                else {
                                    "x_model": sel.cell.x_model,
                                    "y_model": sel.cell.y_model,
                                    "column": sel.cell.column,
                                    "filter_mode": sel.cell.filter_mode,
                                    "correctness": sel.cell.correctness,
                                },
                                "origin": origin_dict(sel.origin),
                                "members": list(sel.members),
                            }
                            for sel in s.selections.values()
                        ],
                    }
                    for s in self._sessions.values()
                ],
            }
        Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")

    def restore(self, path) -> None:
        import json
        from pathlib import Path

        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        with self._lock:
            self._next = int(payload["next"])
            self._sessions.clear()
            for raw in payload["sessions"]:
                session = Session(
                    id=raw["id"],
                    coordinate_mode=raw["coordinate_mode"],
                    divergence_cfg=dv.DivergenceConfig(
                        smoothing_alpha=raw["divergence"]["smoothing_alpha"],
                        numeric_bins=raw["divergence"]["numeric_bins"],
                    ),
                    geometry_cfg=geo.GeometryConfig(**raw["geometry"]),
                )
                session._next_selection = int(raw["next_selection"])
                for sel_raw in raw["selections"]:
                    cell = None
                    if sel_raw["cell"] is not None:
                        cell = sl.CellSpec(**sel_raw["cell"])
                    origin = None
                    if sel_raw["origin"] is not None:
                        if sel_raw["origin"]["type"] == "quadrant":
                            origin = sl.QuadrantOrigin(sel_raw["origin"]["quadrant"])
                        else:
                            origin = sl.LassoOrigin(
                                tuple(tuple(v) for v in sel_raw["origin"]["polygon"])
                            )
                    session.selections[sel_raw["id"]] = sl.Selection(
                        id=sel_raw["id"],
                        cell=cell,
                        members=tuple(sel_raw["members"]),
                        origin=origin,
                    )
                self._sessions[session.id] = session


def _json(payload) -> Response:
    return Response(content=dumps_bytes(payload), media_type="application/json")


def _bad_request(message: str) -> HTTPException:
    return HTTPException(status_code=400, detail=message)


# ---------------------------------------------------------------------------
# request parsing helpers


def _model_id(d: Dataset, label: str) -> int:
    try:
        return d.model_index(label)
    except KeyError:
        raise _bad_request(f"unknown model label {label!r}") from None


def _parse_column(d: Dataset, column: str):
    """Class id for classification; ``(feature, value)`` partition or None for regression."""
    if d.is_classification:
        try:
            return d.class_index(column)
        except KeyError:
            raise _bad_request(f"unknown class label {column!r}") from None
    if column in ("", "*"):
        return None
    if "=" not in column:
        raise _bad_request(f"regression column must be '*' or 'feature=value', got {column!r}")
    name, _, raw = column.partition("=")
    try:
        col = d.feature(name)
    except KeyError:
        raise _bad_request(f"unknown feature {name!r}") from None
    if col.kind == NUMERIC:
        try:
            return (name, float(raw))
        except ValueError:
            raise _bad_request(f"numeric partition value must be a number, got {raw!r}") from None
    if col.kind == BOOLEAN:
        return (name, raw.strip().lower() == "true")
    return (name, raw)


def _cell_spec(d: Dataset, x_model: str, y_model: str, column: str, filter_mode: str, correctness: str):
    xi = _model_id(d, x_model)
    yi = _model_id(d, y_model)
    if d.is_classification:
        try:
            return sl.CellSpec(
                x_model=xi,
                y_model=yi,
                column=_parse_column(d, column),
                filter_mode=filter_mode,
                correctness=correctness,
            )
        except ValueError as exc:
            raise _bad_request(str(exc)) from None
    if filter_mode != sl.ALL or correctness != "any":
        raise _bad_request("regression cells support only filter_mode=ALL and correctness=any")
    if xi == yi:
        raise _bad_request("cell needs two distinct models")
    return (xi, yi, _parse_column(d, column))


def _column_label(d: Dataset, column) -> str:
    if d.is_classification:
        return (d.class_labels or [])[column]
    if column is None:
        return "*"
    name, value = column
    if isinstance(value, bool):
        return f"{name}={'true' if value else 'false'}"
    return f"{name}={value}"


def _cell_points(d: Dataset, spec_or_tuple, mode: str):
    try:
        if d.is_classification:
            return sl.cell_points(d, spec_or_tuple, mode)
        xi, yi, partition = spec_or_tuple
        return sl.regression_points(d, xi, yi, partition=partition)
    except (ValueError, TaskMismatchError) as exc:
        raise _bad_request(str(exc)) from None


def _point_payload(d: Dataset, p) -> dict:
    if d.is_classification:
        return {"instance": p.instance, "x": p.x, "y": p.y, "color": p.color, "quadrant": p.quadrant}
    return {
        "instance": p.instance,
        "x": p.x,
        "y": p.y,
        "over_x": p.over_x,
        "over_y": p.over_y,
        "quadrant": p.quadrant,
    }


def _cell_payload(d: Dataset, x_model: str, y_model: str, column, filter_mode: str, correctness: str) -> dict:
    return {
        "x_model": x_model,
        "y_model": y_model,
        "column": _column_label(d, column),
        "filter_mode": filter_mode,
        "correctness": correctness,
    }


def _parse_rows(d: Dataset, rows: str) -> list[tuple[int, int]]:
    if rows == "all-pairs":
        m = d.n_models
        return [(i, j) for i in range(m) for j in range(i + 1, m)]
    if rows.endswith("-vs-rest"):
        anchor = _model_id(d, rows[: -len("-vs-rest")])
        return [(anchor, j) for j in range(d.n_models) if j != anchor]
    if ":" in rows:
        x_label, _, y_label = rows.partition(":")
        return [(_model_id(d, x_label), _model_id(d, y_label))]
    raise _bad_request(f"rows must be 'all-pairs', '<model>-vs-rest' or '<x>:<y>', got {rows!r}")


def _selection_payload(selection: sl.Selection, d: Dataset) -> dict:
    if isinstance(selection.origin, sl.QuadrantOrigin):
        origin = {"type": "quadrant", "quadrant": selection.origin.quadrant}
    elif isinstance(selection.origin, sl.LassoOrigin):
        origin = {"type": "lasso", "polygon": [[x, y] for x, y in selection.origin.polygon]}
    else:
        origin = None
    cell = None
    if selection.cell is not None:
        spec = selection.cell
        cell = _cell_payload(
            d,
            d.model_labels[spec.x_model],
            d.model_labels[spec.y_model],
            spec.column,
            spec.filter_mode,
            spec.correctness,
        )
    return {"id": selection.id, "cell": cell, "origin": origin, "members": list(selection.members)}


# ---------------------------------------------------------------------------
# feature table


def _row_aggregates(d: Dataset, subset: set[int]) -> dict[str, float]:
    """Per-row aggregate values for one subset, keyed by feature-table row id.

    Rows are sparse tokens (raw), categorical categories (``name:value``),
    and numeric/boolean column names.
    """
    out: dict[str, float] = {}
    ids = sorted(subset)
    for col in d.features:
        agg = dv.aggregate(d, ids, col)
        if col.kind == SPARSE_COUNT:
            for token, value in agg.values.items():
                out[token] = out.get(token, 0.0) + value
        elif col.kind == CATEGORICAL:
            for cat, value in agg.values.items():
                out[f"{col.name}:{cat}"] = value
        else:
            out[col.name] = agg.get(col.name)
    return out


def _all_row_keys(d: Dataset) -> list[str]:
    keys: set[str] = set()
    for col in d.features:
        if col.kind == SPARSE_COUNT:
            for counts in col.values:
                keys.update(counts.keys())
        elif col.kind == CATEGORICAL:
            keys.update(f"{col.name}:{v}" for v in col.values)
        else:
            keys.add(col.name)
    return sorted(keys)


def _feature_table(d: Dataset, session: Session, members: set[int], top_k: int, sort_keys: list[str]) -> dict:
    classes = list(range(d.n_classes))
    gt = d.ground_truth
    per_column: list[dict[str, dict[str, float]]] = []
    for c in classes:
        class_set = set(int(i) for i in (gt == c).nonzero()[0])
        per_column.append(
            {
                "C": _row_aggregates(d, class_set),
                "G": _row_aggregates(d, members & class_set),
                "N": _row_aggregates(d, members - class_set),
            }
        )
    # Global sort table: each key's per-column value summed across columns.
    table: dict[str, dict[str, float]] = {}
    for key in _all_row_keys(d):
        table[key] = {
            k: sum(col[k].get(key, 0.0) for col in per_column) for k in ("C", "G", "N")
        }
    try:
        ordered = dv.rank_features(table, sort_keys, top_k)
    except ValueError as exc:
        raise _bad_request(str(exc)) from None
    divergences = [
        dv.column_divergence(d, members, c, session.divergence_cfg) for c in classes
    ]
    rows = []
    for key in ordered:
        rows.append(
            {
                "feature": key,
                "cells": [
                    {
                        "c": per_column[c]["C"].get(key, 0.0),
                        "g": per_column[c]["G"].get(key, 0.0),
                        "n": per_column[c]["N"].get(key, 0.0),
                    }
                    for c in classes
                ],
            }
        )
    return {
        "columns": list(d.class_labels or []),
        "divergence": divergences,
        "rows": rows,
    }


# ---------------------------------------------------------------------------
# app factory


def create_app(dataset: Dataset, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="modeldiff", docs_url=None, redoc_url=None)
    store = SessionStore(dataset)
    app.state.store = store

    @app.get(API + "/session")
    def get_session(
        id: str | None = None,
        coordinate_mode: str | None = None,
        smoothing_alpha: float | None = None,
        numeric_bins: int | None = None,
        eps: float | None = None,
        min_pts: int | None = None,
        hull_k: int | None = None,
    ) -> Response:
        d = store.dataset
        if id is not None:
            session = store.get(id)
        else:
            mode = coordinate_mode or sl.CONFIDENCE
            if mode not in sl.COORDINATE_MODES:
                raise _bad_request(f"unknown coordinate mode {mode!r}")
            try:
                div_cfg = dv.DivergenceConfig(
                    smoothing_alpha=smoothing_alpha if smoothing_alpha is not None else 1e-6,
                    numeric_bins=numeric_bins if numeric_bins is not None else 20,
                )
                geo_cfg = geo.GeometryConfig(
                    eps=eps if eps is not None else 0.05,
                    min_pts=min_pts if min_pts is not None else 5,
                    hull_k=hull_k if hull_k is not None else 3,
                )
            except ValueError as exc:
                raise _bad_request(str(exc)) from None
            session = store.create(
                coordinate_mode=mode, divergence_cfg=div_cfg, geometry_cfg=geo_cfg
            )
        return _json(
            {
                "session": session.id,
                "task": d.task,
                "models": list(d.model_labels),
                "classes": list(d.class_labels) if d.class_labels else None,
                "instances": d.n_instances,
                "features": [{"name": c.name, "kind": c.kind} for c in d.features],
                "coordinate_mode": session.coordinate_mode,
                "selections": sorted(session.selections, key=lambda s: int(s.removeprefix("sel"))),
            }
        )

    @app.get(API + "/matrix")
    def get_matrix(
        session: str,
        rows: str = "all-pairs",
        cols: str | None = None,
        filter_mode: str = sl.ALL,
        correctness: str = "any",
    ) -> Response:
        sess = store.get(session)
        d = store.dataset
        if not d.is_classification and (filter_mode != sl.ALL or correctness != "any"):
            raise _bad_request("regression matrices support only filter_mode=ALL and correctness=any")
        pairs = _parse_rows(d, rows)
        if cols is not None:
            col_keys = [_parse_column(d, c) for c in cols.split(",") if c != ""]
        elif d.is_classification:
            col_keys = list(range(d.n_classes))
        else:
            col_keys = [None]
        cells = []
        for xi, yi in pairs:
            row_cells = []
            for col in col_keys:
                if d.is_classification:
                    spec = sl.CellSpec(
                        x_model=xi, y_model=yi, column=col,
                        filter_mode=filter_mode, correctness=correctness,
                    )
                    points = _cell_points(d, spec, sess.coordinate_mode)
                else:
                    points = _cell_points(d, (xi, yi, col), sess.coordinate_mode)
                counts = sl.quadrant_counts(points)
                score = None if counts.total == 0 else enc.complementarity(counts).value
                row_cells.append(
                    {
                        "counts": list(counts.as_tuple()),
                        "total": counts.total,
                        "complementarity": score,
                    }
                )
            cells.append(row_cells)
        return _json(
            {
                "rows": [
                    {"x_model": d.model_labels[xi], "y_model": d.model_labels[yi]}
                    for xi, yi in pairs
                ],
                "cols": [_column_label(d, c) for c in col_keys],
                "filter_mode": filter_mode,
                "correctness": correctness,
                "cells": cells,
            }
        )

    @app.get(API + "/cell")
    def get_cell(
        session: str,
        x_model: str,
        y_model: str,
        column: str = "*",
        filter_mode: str = sl.ALL,
        correctness: str = "any",
        representation: str = "points",
    ) -> Response:
        sess = store.get(session)
        d = store.dataset
        if representation not in ("points", "contours"):
            raise _bad_request(f"unknown representation {representation!r}")
        spec = _cell_spec(d, x_model, y_model, column, filter_mode, correctness)
        points = _cell_points(d, spec, sess.coordinate_mode)
        col = spec.column if d.is_classification else spec[2]
        payload = {
            "cell": _cell_payload(d, x_model, y_model, col, filter_mode, correctness),
            "coordinate_mode": sess.coordinate_mode,
        }
        if representation == "points":
            payload["points"] = [_point_payload(d, p) for p in points]
        else:
            span = 2.0
            if not d.is_classification and points:
                xs = [p.x for p in points]
                ys = [p.y for p in points]
                span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
            contours, noise = geo.cell_contours(points, sess.geometry_cfg, span=span)
            payload["contours"] = [
                {
                    "color": c.color_class,
                    "quadrant": c.quadrant,
                    "polygon": [[x, y] for x, y in c.polygon],
                    "member_count": c.member_count,
                    "degenerate": c.degenerate,
                }
                for c in contours
            ]
            payload["noise"] = [_point_payload(d, p) for p in noise]
        return _json(payload)

    @app.post(API + "/selection")
    async def post_selection(request: Request) -> Response:
        body = await _read_json(request)
        sess = store.get(str(body.get("session", "")))
        d = store.dataset
        cell = body.get("cell")
        if not isinstance(cell, dict):
            raise _bad_request("body needs a 'cell' object")
        spec = _cell_spec(
            d,
            str(cell.get("x_model", "")),
            str(cell.get("y_model", "")),
            str(cell.get("column", "*")),
            str(cell.get("filter_mode", sl.ALL)),
            str(cell.get("correctness", "any")),
        )
        points = _cell_points(d, spec, sess.coordinate_mode)
        origin = body.get("origin")
        if not isinstance(origin, dict) or origin.get("type") not in ("quadrant", "lasso"):
            raise _bad_request("origin must be {'type': 'quadrant'|'lasso', ...}")
        cell_for_selection = spec if d.is_classification else None
        try:
            if origin["type"] == "quadrant":
                selection = sl.select_quadrant(points, int(origin.get("quadrant", 0)), cell_for_selection)
            else:
                polygon = origin.get("polygon")
                if not isinstance(polygon, list):
                    raise _bad_request("lasso origin needs a 'polygon' vertex list")
                selection = sl.select_lasso(points, [(float(x), float(y)) for x, y in polygon], cell_for_selection)
        except geo.DegeneratePolygonError as exc:
            raise _bad_request(str(exc)) from None
        except (TypeError, ValueError) as exc:
            raise _bad_request(str(exc)) from None
        stored = sess.add_selection(selection)
        return _json(_selection_payload(stored, d))

    @app.get(API + "/selection/{selection_id}")
    def get_selection(selection_id: str, session: str) -> Response:
        sess = store.get(session)
        selection = sess.selections.get(selection_id)
        if selection is None:
            raise HTTPException(status_code=404, detail=f"unknown selection {selection_id!r}")
        return _json(_selection_payload(selection, store.dataset))

    @app.get(API + "/features")
    def get_features(
        session: str, selection: str, top_k: int = 20, sort_keys: str = "N"
    ) -> Response:
        sess = store.get(session)
        d = store.dataset
        if not d.is_classification:
            raise _bad_request("the feature table requires a classification dataset")
        sel = sess.selections.get(selection)
        if sel is None:
            raise HTTPException(status_code=404, detail=f"unknown selection {selection!r}")
        if not sel.members:
            raise _bad_request("selection is empty; no distributions to compare")
        keys = [k for k in sort_keys.split(",") if k]
        payload = {"selection": sel.id, "sort_keys": keys, "top_k": top_k}
        payload.update(_feature_table(d, sess, set(sel.members), top_k, keys))
        return _json(payload)

    @app.get(API + "/divergence")
    def get_divergence(session: str, selection: str, column: str | None = None) -> Response:
        sess = store.get(session)
        d = store.dataset
        if not d.is_classification:
            raise _bad_request("column divergence requires a classification dataset")
        sel = sess.selections.get(selection)
        if sel is None:
            raise HTTPException(status_code=404, detail=f"unknown selection {selection!r}")
        if not sel.members:
            raise _bad_request("selection is empty; no distributions to compare")
        if column is not None:
            c = _parse_column(d, column)
            value = dv.column_divergence(d, sel.members, c, sess.divergence_cfg)
            return _json({"selection": sel.id, "column": column, "divergence": value})
        values = [
            dv.column_divergence(d, sel.members, c, sess.divergence_cfg)
            for c in range(d.n_classes)
        ]
        return _json(
            {
                "selection": sel.id,
                "columns": list(d.class_labels or []),
                "divergence": values,
            }
        )

    @app.get(API + "/complementarity")
    def get_complementarity(
        session: str,
        column: str | None = None,
        filter_mode: str = sl.ALL,
        correctness: str = "any",
    ) -> Response:
        sess = store.get(session)
        d = store.dataset
        if d.is_classification and column is None:
            raise _bad_request("classification complementarity needs a 'column' class label")
        col = _parse_column(d, column) if column is not None else None
        try:
            matrix = enc.complementarity_matrix(
                d,
                column=col,
                filter_mode=filter_mode,
                mode=sess.coordinate_mode,
                correctness=correctness,
            )
        except (ValueError, TaskMismatchError) as exc:
            raise _bad_request(str(exc)) from None
        return _json(
            {
                "models": list(d.model_labels),
                "column": _column_label(d, col) if (d.is_classification or col is not None) else "*",
                "filter_mode": filter_mode,
                "matrix": matrix,
            }
        )

    @app.post(API + "/encoders")
    async def post_encoders(request: Request) -> Response:
        body = await _read_json(request)
        sess = store.get(str(body.get("session", "")))
        d = store.dataset

        def members_of(key: str) -> list[int]:
            sel_key = f"selection_{key}"
            mem_key = f"members_{key}"
            if sel_key in body:
                sel = sess.selections.get(str(body[sel_key]))
                if sel is None:
                    raise HTTPException(
                        status_code=404, detail=f"unknown selection {body[sel_key]!r}"
                    )
                return list(sel.members)
            members = body.get(mem_key)
            if not isinstance(members, list):
                raise _bad_request(f"body needs '{sel_key}' or '{mem_key}'")
            return [int(i) for i in members]

        subset_a = members_of("a")
        subset_b = members_of("b")
        threshold = float(body.get("threshold", 0.0))
        try:
            chosen = enc.select_encodable_features(
                d, subset_a, subset_b, threshold, sess.divergence_cfg
            )
            built = [
                (name, div, enc.build_encoder(d, name, subset_a, subset_b, sess.divergence_cfg))
                for name, div in chosen
            ]
        except ValueError as exc:
            raise _bad_request(str(exc)) from None
        return _json(
            {
                "threshold": threshold,
                "encoders": [
                    dict(e.to_json_dict(), divergence=div) for _, div, e in built
                ],
            }
        )

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")

    return app


async def _read_json(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise _bad_request("request body must be JSON") from None
    if not isinstance(body, dict):
        raise _bad_request("request body must be a JSON object")
    return body
