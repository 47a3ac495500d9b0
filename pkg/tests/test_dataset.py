from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from modeldiff.dataset import (
    Correctness,
    Dataset,
    FeatureColumn,
    TaskMismatchError,
    correctness,
    predicted_class,
    validate_dataset,
)


class TestPredictedClass:
    def test_unique_argmax(self):
        assert predicted_class((0.7, 0.2, 0.1)) == 0

    def test_tie_breaks_to_lowest_index(self):
        assert predicted_class((0.4, 0.4, 0.2)) == 0
        assert predicted_class((0.2, 0.4, 0.4)) == 1

    def test_toy_instance_i4(self):
        assert predicted_class((0.1, 0.2, 0.7)) == 2

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            predicted_class([])

    @given(
        st.lists(st.floats(min_value=1e-6, max_value=1.0), min_size=2, max_size=8),
        st.floats(min_value=0.1, max_value=100.0),
    )
    def test_invariant_under_positive_scaling(self, scores, scale):
        assert predicted_class(scores) == predicted_class([s * scale for s in scores])


class TestCorrectness:
    def test_definition_table(self, toy_dataset):
        # i0: GT=A and both predict A.
        assert correctness(toy_dataset, 0, 0, 0) is Correctness.TP
        # i1: GT=A, M0 predicts B -> relative to A that is a miss.
        assert correctness(toy_dataset, 1, 0, 0) is Correctness.FN
        # i3: GT=B, M0 predicts A -> false alarm for A.
        assert correctness(toy_dataset, 3, 0, 0) is Correctness.FP
        # i2: GT=B, M0 predicts B -> nothing to do with A.
        assert correctness(toy_dataset, 2, 0, 0) is Correctness.TN

    def test_exactly_one_category_per_class(self, toy_dataset):
        for i in range(6):
            for m in range(2):
                cats = [correctness(toy_dataset, i, m, c) for c in range(3)]
                # The predicted class is the only TP-or-FP; the GT class the only TP-or-FN.
                assert sum(c in (Correctness.TP, Correctness.FP) for c in cats) == 1
                assert sum(c in (Correctness.TP, Correctness.FN) for c in cats) == 1

    def test_regression_dataset_rejected(self):
        d = Dataset(
            task="regression",
            model_labels=["M0"],
            predictions=[np.array([1.0, 2.0])],
            ground_truth=np.array([1.0, 2.0]),
        )
        with pytest.raises(TaskMismatchError):
            correctness(d, 0, 0, 0)


class TestValidation:
    def test_toy_fixture_is_clean(self, toy_dataset):
        assert validate_dataset(toy_dataset) == []

    def test_bad_probability_sum_is_located(self, toy_dataset):
        scores = np.array(toy_dataset.predictions[0])
        scores[3] = (0.6, 0.4, 0.2)  # sums to 1.2
        bad = Dataset(
            task="classification",
            model_labels=["M0", "M1"],
            predictions=[scores, toy_dataset.predictions[1]],
            ground_truth=toy_dataset.ground_truth,
            class_labels=["A", "B", "C"],
        )
        report = validate_dataset(bad)
        assert len(report) == 1
        assert "M0" in report[0] and "instance 3" in report[0] and "1.2" in report[0]

    def test_nan_regression_output_is_located(self):
        d = Dataset(
            task="regression",
            model_labels=["M0"],
            predictions=[np.array([1.0, float("nan"), 3.0])],
            ground_truth=np.array([1.0, 2.0, 3.0]),
        )
        report = validate_dataset(d)
        assert len(report) == 1
        assert "non-finite" in report[0] and "instance 1" in report[0]

    def test_out_of_range_ground_truth(self):
        d = Dataset(
            task="classification",
            model_labels=["M0", "M1"],
            predictions=[np.full((2, 2), 0.5), np.full((2, 2), 0.5)],
            ground_truth=np.array([0, 5]),
            class_labels=["A", "B"],
        )
        assert any("out of range" in line for line in validate_dataset(d))

    def test_negative_sparse_count(self):
        d = Dataset(
            task="classification",
            model_labels=["M0", "M1"],
            predictions=[np.full((2, 2), 0.5), np.full((2, 2), 0.5)],
            ground_truth=np.array([0, 1]),
            class_labels=["A", "B"],
            features=[FeatureColumn("tokens", "sparse-count", [{"x": -1.0}, {}])],
        )
        assert any("negative token count" in line for line in validate_dataset(d))

    def test_feature_length_mismatch(self, toy_dataset):
        bad = Dataset(
            task="classification",
            model_labels=["M0", "M1"],
            predictions=list(toy_dataset.predictions),
            ground_truth=toy_dataset.ground_truth,
            class_labels=["A", "B", "C"],
            features=[FeatureColumn("short", "numeric", [1.0, 2.0])],
        )
        assert any("short" in line for line in validate_dataset(bad))


class TestDatasetBasics:
    def test_immutable_arrays(self, toy_dataset):
        with pytest.raises(ValueError):
            toy_dataset.ground_truth[0] = 2
        with pytest.raises(ValueError):
            toy_dataset.predictions[0][0, 0] = 0.5

    def test_label_lookups(self, toy_dataset):
        assert toy_dataset.model_index("M1") == 1
        assert toy_dataset.class_index("C") == 2
        with pytest.raises(KeyError):
            toy_dataset.model_index("M9")
        with pytest.raises(KeyError):
            toy_dataset.feature("nope")

    def test_predicted_classes_cached_per_model(self, toy_dataset):
        assert toy_dataset.predicted_classes(0).tolist() == [0, 1, 1, 0, 2, 1]
        assert toy_dataset.predicted_classes(1).tolist() == [0, 0, 1, 1, 2, 0]

    def test_equality_is_structural(self, toy_dataset):
        from tests.conftest import build_toy_dataset

        assert toy_dataset == build_toy_dataset()
