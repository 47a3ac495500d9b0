"""Command-line entry points: ingest, validate, encode, serve."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from modeldiff import encoders as enc
from modeldiff.dataset import NUMERIC, SPARSE_COUNT, validate_dataset
from modeldiff.divergence import DivergenceConfig
from modeldiff.ingest import BundleError, load_bundle


def _cmd_ingest(args: argparse.Namespace) -> int:
    dataset = load_bundle(args.manifest)
    cache = {
        "task": dataset.task,
        "models": dataset.model_labels,
        "classes": dataset.class_labels,
        "instances": dataset.n_instances,
        "ground_truth": dataset.ground_truth.tolist(),
        "predictions": [p.tolist() for p in dataset.predictions],
        "features": [
            {
                "name": c.name,
                "kind": c.kind,
                "values": c.values.tolist() if c.kind in ("numeric", "boolean") else list(c.values),
            }
            for c in dataset.features
        ],
    }
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(cache) + "\n", encoding="utf-8")
    print(
        f"ingested {dataset.n_instances} instances, {dataset.n_models} models, "
        f"{len(dataset.features)} feature columns -> {out}"
    )
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        dataset = load_bundle(args.manifest)
    except BundleError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    report = validate_dataset(dataset)
    if report:
        for line in report:
            print(line, file=sys.stderr)
        return 1
    return 0


def _read_id_file(path: str) -> list[int]:
    ids = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        try:
            ids.append(int(text))
        except ValueError:
            raise SystemExit(f"{path}:{lineno}: not an instance id: {text!r}")
    return ids


def _cmd_encode(args: argparse.Namespace) -> int:
    dataset = load_bundle(args.manifest)
    subset_a = _read_id_file(args.selection_a)
    subset_b = _read_id_file(args.selection_b)
    cfg = DivergenceConfig()
    chosen = enc.select_encodable_features(dataset, subset_a, subset_b, args.threshold, cfg)
    built = [enc.build_encoder(dataset, name, subset_a, subset_b, cfg) for name, _ in chosen]
    augmented = enc.apply_encoders(dataset, built)

    columns = [c for c in augmented if c.kind != SPARSE_COUNT]
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([c.name for c in columns])
        for i in range(dataset.n_instances):
            row = []
            for c in columns:
                v = c.values[i]
                if c.kind == NUMERIC:
                    row.append(repr(float(v)))
                elif c.kind == "boolean":
                    row.append("true" if v else "false")
                else:
                    row.append(str(v))
            writer.writerow(row)

    if args.encoders_json:
        payload = [
            dict(e.to_json_dict(), divergence=d) for e, (_, d) in zip(built, chosen)
        ]
        Path(args.encoders_json).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(f"selected {len(built)} features at threshold {args.threshold}; wrote {out}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from modeldiff.service import create_app

    dataset = load_bundle(args.manifest)
    app = create_app(dataset, static_dir=args.static)
    if args.sessions:
        store = app.state.store
        if Path(args.sessions).exists():
            store.restore(args.sessions)
        app.add_event_handler("shutdown", lambda: store.snapshot(args.sessions))
    port = int(os.environ.get("MANIFOLD_PORT", args.port))
    uvicorn.run(app, host=args.host, port=port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modeldiff", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="load, validate and cache a bundle")
    p_ingest.add_argument("--manifest", required=True)
    p_ingest.add_argument("--out", required=True, help="cache file to write (JSON)")
    p_ingest.set_defaults(func=_cmd_ingest)

    p_validate = sub.add_parser("validate", help="exit 0 iff the bundle is valid")
    p_validate.add_argument("--manifest", required=True)
    p_validate.set_defaults(func=_cmd_validate)

    p_encode = sub.add_parser("encode", help="build encoders from two instance-id files")
    p_encode.add_argument("--manifest", required=True)
    p_encode.add_argument("--selection-a", required=True, help="file of instance ids, one per line")
    p_encode.add_argument("--selection-b", required=True)
    p_encode.add_argument("--threshold", type=float, default=0.0)
    p_encode.add_argument("--out", required=True, help="augmented feature table CSV")
    p_encode.add_argument("--encoders-json", default=None, help="also export encoders as JSON")
    p_encode.set_defaults(func=_cmd_encode)

    p_serve = sub.add_parser("serve", help="serve the HTTP API (and optionally the UI)")
    p_serve.add_argument("--manifest", required=True)
    p_serve.add_argument("--port", type=int, default=8800)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--static", default=None, help="directory of built UI assets")
    p_serve.add_argument(
        "--sessions", default=None, help="session snapshot file: restored at startup, saved on shutdown"
    )
    p_serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BundleError as exc:
        print(str(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
