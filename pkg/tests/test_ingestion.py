from __future__ import annotations

import json

import pytest

from modeldiff.ingest import (
    BundleError,
    ParseError,
    export_bundle,
    load_bundle,
    parse_sparse_features,
)


class TestLoadBundle:
    def test_toy_bundle_counts(self, toy_bundle):
        d = load_bundle(toy_bundle)
        assert d.n_instances == 6
        assert d.n_classes == 3
        assert d.model_labels == ["M0", "M1"]
        assert [c.name for c in d.features] == ["length", "source", "tokens"]

    def test_matches_in_memory_fixture(self, toy_bundle, toy_dataset):
        assert load_bundle(toy_bundle) == toy_dataset

    def test_deterministic(self, toy_bundle):
        assert load_bundle(toy_bundle) == load_bundle(toy_bundle)

    def test_row_count_mismatch_names_both_files(self, toy_bundle):
        m0 = toy_bundle.parent / "m0.csv"
        lines = m0.read_text().splitlines()
        m0.write_text("\n".join(lines[:-1]) + "\n")  # drop one prediction row
        with pytest.raises(BundleError) as err:
            load_bundle(toy_bundle)
        assert "m0.csv" in str(err.value) and "ground_truth.csv" in str(err.value)

    def test_unknown_task_cites_manifest_field(self, toy_bundle):
        manifest = json.loads(toy_bundle.read_text())
        manifest["task"] = "ranking"
        toy_bundle.write_text(json.dumps(manifest))
        with pytest.raises(ParseError) as err:
            load_bundle(toy_bundle)
        assert "task" in str(err.value) and "ranking" in str(err.value)

    def test_invalid_probabilities_fail_validation(self, toy_bundle):
        m0 = toy_bundle.parent / "m0.csv"
        lines = m0.read_text().splitlines()
        lines[1] = "0.9,0.9,0.9"
        m0.write_text("\n".join(lines) + "\n")
        with pytest.raises(BundleError) as err:
            load_bundle(toy_bundle)
        assert "sum" in str(err.value)

    def test_parse_error_carries_location(self, toy_bundle):
        m1 = toy_bundle.parent / "m1.csv"
        lines = m1.read_text().splitlines()
        lines[2] = "0.6,zzz,0.1"
        m1.write_text("\n".join(lines) + "\n")
        with pytest.raises(ParseError) as err:
            load_bundle(toy_bundle)
        assert err.value.line == 3 and err.value.column == 2

    def test_crlf_tolerated(self, toy_bundle):
        gt = toy_bundle.parent / "ground_truth.csv"
        gt.write_bytes(gt.read_text().replace("\n", "\r\n").encode())
        assert load_bundle(toy_bundle).n_instances == 6

    def test_regression_bundle(self, tmp_path):
        (tmp_path / "gt.csv").write_text("value\n1.5\n2.5\n")
        (tmp_path / "p.csv").write_text("value\n1.0\n3.0\n")
        manifest = tmp_path / "manifest.json"
        manifest.write_text(
            json.dumps(
                {
                    "task": "regression",
                    "models": [{"label": "M0", "predictions": "p.csv"}],
                    "ground_truth": "gt.csv",
                }
            )
        )
        d = load_bundle(manifest)
        assert d.task == "regression"
        assert d.predictions[0].tolist() == [1.0, 3.0]


class TestSparseFeatures:
    def test_triplet_transcription(self, tmp_path):
        path = tmp_path / "sparse.csv"
        path.write_text('instance_id,token,value\n0,"the old man",2\n1,"the old man",1\n')
        (column,) = parse_sparse_features(path, n_instances=6)
        assert column.kind == "sparse-count"
        assert column.values[0] == {"the old man": 2.0}
        assert column.values[1] == {"the old man": 1.0}
        assert all(column.values[i] == {} for i in range(2, 6))

    def test_out_of_range_instance(self, tmp_path):
        path = tmp_path / "sparse.csv"
        path.write_text("instance_id,token,value\n99,tok,1\n")
        with pytest.raises(ParseError) as err:
            parse_sparse_features(path, n_instances=6)
        assert "99" in str(err.value)

    def test_negative_count(self, tmp_path):
        path = tmp_path / "sparse.csv"
        path.write_text("instance_id,token,value\n0,tok,-2\n")
        with pytest.raises(ParseError):
            parse_sparse_features(path, n_instances=6)

    def test_empty_file_is_all_zero(self, tmp_path):
        path = tmp_path / "sparse.csv"
        path.write_text("instance_id,token,value\n")
        (column,) = parse_sparse_features(path, n_instances=3)
        assert [dict(v) for v in column.values] == [{}, {}, {}]

    def test_family_column_splits(self, tmp_path):
        path = tmp_path / "sparse.csv"
        path.write_text(
            "instance_id,token,value,family\n0,a,1,unigram\n0,a b,1,bigram\n"
        )
        columns = parse_sparse_features(path, n_instances=2)
        assert [c.name for c in columns] == ["bigram", "unigram"]


class TestRoundTrip:
    def test_export_then_load_is_identity(self, toy_bundle, tmp_path):
        original = load_bundle(toy_bundle)
        manifest = export_bundle(original, tmp_path / "exported")
        assert load_bundle(manifest) == original

    def test_regression_round_trip(self, tmp_path):
        import numpy as np

        from modeldiff.dataset import Dataset, FeatureColumn

        d = Dataset(
            task="regression",
            model_labels=["M0", "M1"],
            predictions=[np.array([1.1, 2.2, 3.3]), np.array([0.9, 2.0, 3.5])],
            ground_truth=np.array([1.0, 2.0, 3.0]),
            features=[
                FeatureColumn("hour", "categorical", ["1", "2", "3"]),
                FeatureColumn("temp", "numeric", [0.1, 0.2, 0.30000000000000004]),
                FeatureColumn("holiday", "boolean", [True, False, True]),
            ],
        )
        manifest = export_bundle(d, tmp_path / "reg")
        assert load_bundle(manifest) == d
