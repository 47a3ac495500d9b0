"""Parse, validate and assemble datasets from on-disk bundles.

A bundle is a JSON manifest plus a handful of CSV files:

- ``ground_truth``: one ``label`` (classification) or ``value`` (regression)
  column, one row per instance; row order defines instance ids.
- per-model predictions: one probability column per class, headers matching
  the manifest's class list, or a single ``value`` column for regression.
- ``features`` (optional): dense feature CSV, one column per feature.
- ``sparse_features`` (optional): family name -> triplet CSV of
  ``instance_id,token,value`` rows; absent pairs read as 0.

Everything is UTF-8; CRLF line endings are tolerated. Loading is
deterministic and the exporter round-trips: load(export(d)) == d.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from modeldiff.dataset import (
    BOOLEAN,
    CATEGORICAL,
    NUMERIC,
    SPARSE_COUNT,
    Dataset,
    FeatureColumn,
    validate_dataset,
)

TASKS = ("classification", "regression")


class BundleError(ValueError):
    """Anything wrong with a bundle: unreadable, malformed, or invalid."""


class ParseError(BundleError):
    """Malformed file content, located by file, line and column."""

    def __init__(self, message: str, file: str | Path, line: int | None = None, column: int | None = None):
        locus = str(file)
        if line is not None:
            locus += f":{line}"
            if column is not None:
                locus += f":{column}"
        super().__init__(f"{locus}: {message}")
        self.file = str(file)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class ModelEntry:
    label: str
    predictions_path: Path


@dataclass(frozen=True)
class BundleManifest:
    """Parsed manifest: task, label lists, and the file layout of a bundle."""

    task: str
    models: tuple[ModelEntry, ...]
    ground_truth_path: Path
    classes: tuple[str, ...] | None = None
    features_path: Path | None = None
    sparse_features: tuple[tuple[str, Path], ...] = ()
    feature_kinds: tuple[tuple[str, str], ...] = ()


def read_manifest(path: str | Path) -> BundleManifest:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise BundleError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path, exc.lineno, exc.colno) from exc

    task = raw.get("task")
    if task not in TASKS:
        raise ParseError(f"manifest field 'task' must be one of {TASKS}, got {task!r}", path)
    base = path.parent

    models_raw = raw.get("models")
    if not isinstance(models_raw, list) or not models_raw:
        raise ParseError("manifest field 'models' must be a nonempty list", path)
    models = []
    for entry in models_raw:
        if not isinstance(entry, dict) or "label" not in entry or "predictions" not in entry:
            raise ParseError("each model entry needs 'label' and 'predictions'", path)
        models.append(ModelEntry(label=str(entry["label"]), predictions_path=base / entry["predictions"]))

    classes = None
    if task == "classification":
        classes_raw = raw.get("classes")
        if not isinstance(classes_raw, list) or len(classes_raw) < 2:
            raise ParseError("manifest field 'classes' must list at least 2 labels", path)
        classes = tuple(str(c) for c in classes_raw)
    elif "classes" in raw:
        raise ParseError("manifest field 'classes' is only valid for classification", path)

    if "ground_truth" not in raw:
        raise ParseError("manifest field 'ground_truth' is required", path)
    gt_path = base / raw["ground_truth"]

    features_path = base / raw["features"] if raw.get("features") else None
    sparse = tuple(
        (str(name), base / p) for name, p in sorted(raw.get("sparse_features", {}).items())
    )
    kinds = tuple(sorted((str(k), str(v)) for k, v in raw.get("feature_kinds", {}).items()))
    return BundleManifest(
        task=task,
        models=tuple(models),
        ground_truth_path=gt_path,
        classes=classes,
        features_path=features_path,
        sparse_features=sparse,
        feature_kinds=kinds,
    )


def _read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    try:
        with open(path, encoding="utf-8-sig", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise BundleError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise ParseError("file is empty (missing header)", path, 1)
    header, *body = rows
    width = len(header)
    for lineno, row in enumerate(body, start=2):
        if len(row) != width:
            raise ParseError(f"expected {width} fields, found {len(row)}", path, lineno)
    return header, body


def _parse_float(text: str, path: Path, line: int, column: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"not a number: {text!r}", path, line, column) from None


def _parse_int(text: str, path: Path, line: int, column: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"not an integer: {text!r}", path, line, column) from None


def read_ground_truth(path: Path, task: str, classes: tuple[str, ...] | None) -> np.ndarray:
    header, body = _read_csv(path)
    expected = "label" if task == "classification" else "value"
    if header != [expected]:
        raise ParseError(f"ground-truth header must be [{expected!r}], got {header}", path, 1)
    if task == "classification":
        index = {label: i for i, label in enumerate(classes or ())}
        out = np.empty(len(body), dtype=np.int64)
        for i, row in enumerate(body):
            label = row[0]
            if label not in index:
                raise ParseError(f"unknown class label {label!r}", path, i + 2, 1)
            out[i] = index[label]
        return out
    return np.array(
        [_parse_float(row[0], path, i + 2, 1) for i, row in enumerate(body)], dtype=np.float64
    )


def read_predictions(path: Path, task: str, classes: tuple[str, ...] | None) -> np.ndarray:
    header, body = _read_csv(path)
    if task == "classification":
        if header != list(classes or ()):
            raise ParseError(
                f"prediction header must match the class list {list(classes or ())}, got {header}",
                path,
                1,
            )
        out = np.empty((len(body), len(header)), dtype=np.float64)
        for i, row in enumerate(body):
            for j, cell in enumerate(row):
                out[i, j] = _parse_float(cell, path, i + 2, j + 1)
        return out
    if header != ["value"]:
        raise ParseError(f"prediction header must be ['value'], got {header}", path, 1)
    return np.array(
        [_parse_float(row[0], path, i + 2, 1) for i, row in enumerate(body)], dtype=np.float64
    )


def _infer_kind(values: list[str]) -> str:
    lowered = [v.strip().lower() for v in values]
    if lowered and all(v in ("true", "false") for v in lowered):
        return BOOLEAN
    try:
        for v in values:
            float(v)
        return NUMERIC
    except ValueError:
        return CATEGORICAL


def read_dense_features(path: Path, kind_overrides: dict[str, str]) -> list[FeatureColumn]:
    header, body = _read_csv(path)
    if len(set(header)) != len(header):
        raise ParseError("duplicate feature names in header", path, 1)
    columns = []
    for j, name in enumerate(header):
        raw = [row[j] for row in body]
        kind = kind_overrides.get(name) or _infer_kind(raw)
        if kind == NUMERIC:
            values = [_parse_float(v, path, i + 2, j + 1) for i, v in enumerate(raw)]
        elif kind == BOOLEAN:
            values = [v.strip().lower() == "true" for v in raw]
        elif kind == CATEGORICAL:
            values = raw
        else:
            raise ParseError(f"feature kind override {kind!r} is not a dense kind", path, 1, j + 1)
        columns.append(FeatureColumn(name=name, kind=kind, values=values))
    return columns


def parse_sparse_features(path: str | Path, n_instances: int, name: str = "tokens") -> list[FeatureColumn]:
    """Read triplet CSV ``instance_id,token,value`` into sparse-count columns.

    An optional fourth ``family`` column splits rows into one column per
    family; otherwise all rows land in a single column called ``name``.
    An empty file (header only) yields one all-empty column.
    """
    path = Path(path)
    header, body = _read_csv(path)
    if header[:3] != ["instance_id", "token", "value"] or len(header) > 4 or (
        len(header) == 4 and header[3] != "family"
    ):
        raise ParseError(
            f"sparse header must be ['instance_id', 'token', 'value'(, 'family')], got {header}",
            path,
            1,
        )
    has_family = len(header) == 4
    families: dict[str, list[dict]] = {}

    def family_values(family: str) -> list[dict]:
        if family not in families:
            families[family] = [dict() for _ in range(n_instances)]
        return families[family]

    if not has_family:
        family_values(name)
    for i, row in enumerate(body):
        line = i + 2
        instance = _parse_int(row[0], path, line, 1)
        if not 0 <= instance < n_instances:
            raise ParseError(
                f"instance id {instance} out of range for {n_instances} instances", path, line, 1
            )
        value = _parse_float(row[2], path, line, 3)
        if value < 0:
            raise ParseError(f"negative count {value}", path, line, 3)
        family = row[3] if has_family else name
        values = family_values(family)
        token = row[1]
        values[instance][token] = values[instance].get(token, 0.0) + value
    return [
        FeatureColumn(name=family, kind=SPARSE_COUNT, values=families[family])
        for family in sorted(families)
    ]


def load_bundle(manifest_path: str | Path) -> Dataset:
    """Assemble and validate a Dataset from a bundle manifest.

    Instance order follows the ground-truth file; model order follows the
    manifest. Row-count mismatches and validation failures raise
    :class:`BundleError` naming the offending files.
    """
    manifest = read_manifest(manifest_path)
    gt = read_ground_truth(manifest.ground_truth_path, manifest.task, manifest.classes)
    n = gt.shape[0]

    predictions = []
    for entry in manifest.models:
        pred = read_predictions(entry.predictions_path, manifest.task, manifest.classes)
        if pred.shape[0] != n:
            raise BundleError(
                f"row count mismatch: {entry.predictions_path} has {pred.shape[0]} rows, "
                f"{manifest.ground_truth_path} has {n}"
            )
        predictions.append(pred)

    features: list[FeatureColumn] = []
    if manifest.features_path is not None:
        dense = read_dense_features(manifest.features_path, dict(manifest.feature_kinds))
        for col in dense:
            if len(col) != n:
                raise BundleError(
                    f"row count mismatch: {manifest.features_path} has {len(col)} rows, "
                    f"{manifest.ground_truth_path} has {n}"
                )
        features.extend(dense)
    for family, sparse_path in manifest.sparse_features:
        features.extend(parse_sparse_features(sparse_path, n, name=family))

    dataset = Dataset(
        task=manifest.task,
        model_labels=[m.label for m in manifest.models],
        predictions=predictions,
        ground_truth=gt,
        class_labels=list(manifest.classes) if manifest.classes else None,
        features=features,
    )
    report = validate_dataset(dataset)
    if report:
        raise BundleError("bundle failed validation:\n" + "\n".join(f"  - {r}" for r in report))
    return dataset


def _fmt(value: float) -> str:
    # repr round-trips float64 exactly, keeping load(export(d)) == d.
    return repr(float(value))


def export_bundle(d: Dataset, out_dir: str | Path) -> Path:
    """Write a Dataset back out as a loadable bundle; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    def write_csv(name: str, header: list[str], rows: list[list[str]]) -> str:
        with open(out / name, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        return name

    manifest: dict = {"task": d.task}
    if d.is_classification:
        manifest["classes"] = list(d.class_labels or [])
        gt_rows = [[d.class_labels[i]] for i in d.ground_truth.tolist()]
        write_csv("ground_truth.csv", ["label"], gt_rows)
    else:
        write_csv("ground_truth.csv", ["value"], [[_fmt(v)] for v in d.ground_truth.tolist()])
    manifest["ground_truth"] = "ground_truth.csv"

    manifest["models"] = []
    for m, label in enumerate(d.model_labels):
        fname = f"predictions_{m}.csv"
        pred = d.predictions[m]
        if d.is_classification:
            rows = [[_fmt(v) for v in row] for row in pred.tolist()]
            write_csv(fname, list(d.class_labels or []), rows)
        else:
            write_csv(fname, ["value"], [[_fmt(v)] for v in pred.tolist()])
        manifest["models"].append({"label": label, "predictions": fname})

    dense = [c for c in d.features if c.kind != SPARSE_COUNT]
    sparse = [c for c in d.features if c.kind == SPARSE_COUNT]
    if dense:
        header = [c.name for c in dense]
        rows = []
        for i in range(d.n_instances):
            row = []
            for c in dense:
                if c.kind == NUMERIC:
                    row.append(_fmt(c.values[i]))
                elif c.kind == BOOLEAN:
                    row.append("true" if c.values[i] else "false")
                else:
                    row.append(str(c.values[i]))
            rows.append(row)
        write_csv("features.csv", header, rows)
        manifest["features"] = "features.csv"
        manifest["feature_kinds"] = {c.name: c.kind for c in dense}
    if sparse:
        manifest["sparse_features"] = {}
        for c in sparse:
            fname = f"sparse_{c.name}.csv"
            rows = []
            for i, counts in enumerate(c.values):
                for token in sorted(counts):
                    rows.append([str(i), token, _fmt(counts[token])])
            write_csv(fname, ["instance_id", "token", "value"], rows)
            manifest["sparse_features"][c.name] = fname

    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return manifest_path
