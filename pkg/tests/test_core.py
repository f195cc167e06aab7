import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import latbal as lb
from latbal.rng import uniforms
from conftest import tiny_dataset


class TestAttributeSchema:
    def test_valid(self):
        s = lb.AttributeSchema(("glasses", "gender", "smile", "age"))
        assert s.m == 4
        assert s.index_of("smile") == 2

    @pytest.mark.parametrize("names", [(), ("a",) * 21, ("a", "a"), ("a", "")])
    def test_invalid(self, names):
        with pytest.raises(ValueError):
            lb.AttributeSchema(names)

    def test_twenty_attributes_allowed(self):
        assert lb.AttributeSchema(tuple(f"a{k}" for k in range(20))).m == 20


class TestLabelCombination:
    def test_lsb_first_indexing(self):
        # attribute 0 is the least significant bit: "10" -> 1, "01" -> 2
        assert lb.encode_bits((0, 0)) == 0
        assert lb.encode_bits((1, 0)) == 1
        assert lb.encode_bits((0, 1)) == 2
        assert lb.encode_bits((1, 1)) == 3

    def test_decode(self):
        assert lb.decode_index(2, 2) == (0, 1)
        with pytest.raises(ValueError):
            lb.decode_index(4, 2)

    @given(bits=st.lists(st.integers(0, 1), min_size=1, max_size=20))
    @settings(max_examples=200, deadline=None)
    def test_encode_decode_bijection(self, bits):
        bits = tuple(bits)
        assert lb.decode_index(lb.encode_bits(bits), len(bits)) == bits

    def test_from_bits_from_index_roundtrip(self):
        combo = lb.LabelCombination.from_bits((1, 0, 1))
        assert combo.index == 5
        assert lb.LabelCombination.from_index(5, 3) == combo

    def test_rejects_non_binary(self):
        with pytest.raises(ValueError):
            lb.encode_bits((0, 2))


class TestValidateDataset:
    def test_nan_code_reported_with_row(self):
        ds = tiny_dataset([[0, 1], [1, 0]], dim=2)
        codes = ds.codes.copy()
        codes[1, 0] = math.nan
        bad = lb.LatentDataset(dim=2, codes=codes, labels=ds.labels, schema=ds.schema)
        report = lb.validate_dataset(bad)
        assert not report.ok
        assert any("row 1" in v for v in report.violations)

    def test_empty_dataset_is_ok(self):
        schema = lb.AttributeSchema(tuple(f"a{k}" for k in range(4)))
        ds = lb.LatentDataset(dim=512, codes=np.zeros((0, 512)),
                              labels=np.zeros((0, 4), np.uint8), schema=schema)
        assert lb.validate_dataset(ds).ok

    def test_row_count_mismatch(self):
        schema = lb.AttributeSchema(("a", "b"))
        ds = lb.LatentDataset(dim=2, codes=np.zeros((3, 2)),
                              labels=np.zeros((2, 2), np.uint8), schema=schema)
        report = lb.validate_dataset(ds)
        assert any("row-count mismatch" in v for v in report.violations)

    def test_label_values_checked(self):
        ds = tiny_dataset([[0, 1]])
        labels = ds.labels.copy()
        labels[0, 0] = 3
        bad = lb.LatentDataset(dim=2, codes=ds.codes, labels=labels, schema=ds.schema)
        assert not lb.validate_dataset(bad).ok

    def test_confidence_range_checked(self):
        ds = tiny_dataset([[0, 1]], confidences=np.array([[0.5, 1.5]]))
        report = lb.validate_dataset(ds)
        assert any("confidences row 0" in v for v in report.violations)

    def test_valid_oracle_sample(self, dataset20k):
        assert lb.validate_dataset(dataset20k).ok


class TestFilterByConfidence:
    def test_row_at_threshold_survives(self):
        conf = np.array([[0.95, 0.91, 0.99, 0.92]])
        ds = tiny_dataset([[1, 0, 1, 0]], confidences=conf)
        assert lb.filter_by_confidence(ds, 0.9).n == 1

    def test_row_just_below_is_dropped(self):
        conf = np.array([[0.95, 0.89, 0.99, 0.92]])
        ds = tiny_dataset([[1, 0, 1, 0]], confidences=conf)
        assert lb.filter_by_confidence(ds, 0.9).n == 0

    def test_zero_threshold_is_identity(self, world42):
        ds = lb.sample_world(world42, 500, seed=3)
        out = lb.filter_by_confidence(ds, 0.0)
        assert np.array_equal(out.codes, ds.codes)
        assert np.array_equal(out.labels, ds.labels)

    def test_missing_confidences_error(self):
        ds = tiny_dataset([[0, 1]])
        with pytest.raises(ValueError, match="confidence"):
            lb.filter_by_confidence(ds, 0.9)

    @given(threshold=st.floats(0.0, 1.0))
    @settings(max_examples=25, deadline=None)
    def test_idempotent(self, threshold):
        conf = uniforms(11, 40).reshape(20, 2)
        ds = tiny_dataset(np.zeros((20, 2), np.uint8), confidences=conf)
        once = lb.filter_by_confidence(ds, threshold)
        twice = lb.filter_by_confidence(once, threshold)
        assert np.array_equal(once.codes, twice.codes)
        assert once.n == twice.n

    def test_order_preserved(self):
        conf = np.array([[0.99], [0.1], [0.95], [0.97]])
        codes = np.arange(4.0).reshape(4, 1)
        ds = lb.LatentDataset(dim=1, codes=codes, labels=np.zeros((4, 1), np.uint8),
                              schema=lb.AttributeSchema(("a",)), confidences=conf)
        kept = lb.filter_by_confidence(ds, 0.9)
        assert kept.codes.ravel().tolist() == [0.0, 2.0, 3.0]


class TestSplitByAttribute:
    def test_basic_partition(self):
        # label rows "10", "11", "00" (attribute 0 is the first character)
        ds = tiny_dataset([[1, 0], [1, 1], [0, 0]])
        pos, neg = lb.split_by_attribute(ds, 0)
        assert pos.n == 2 and neg.n == 1
        assert np.array_equal(pos.labels, [[1, 0], [1, 1]])

    def test_all_positive_gives_empty_negatives(self):
        ds = tiny_dataset([[1, 1], [1, 1]])
        pos, neg = lb.split_by_attribute(ds, 1)
        assert pos.n == 2 and neg.n == 0

    def test_index_out_of_range(self):
        ds = tiny_dataset([[1, 0]])
        with pytest.raises(IndexError):
            lb.split_by_attribute(ds, 2)

    def test_planted_positive_rate(self):
        # m=1 world with a 30% positive rate; binomial 3-sigma check
        world = lb.make_world(dim=8, m=1, gram=np.eye(1), positive_rates=(0.3,), seed=42)
        ds = lb.sample_world(world, 10_000, seed=42)
        pos, neg = lb.split_by_attribute(ds, 0)
        assert pos.n + neg.n == ds.n
        sigma = math.sqrt(0.3 * 0.7 / 10_000)
        assert abs(pos.n / ds.n - 0.3) <= 3 * sigma

    @given(seed=st.integers(0, 2**32), j=st.integers(0, 3))
    @settings(max_examples=25, deadline=None)
    def test_partition_property(self, seed, j):
        labels = (uniforms(seed, 30 * 4).reshape(30, 4) > 0.5).astype(np.uint8)
        ds = tiny_dataset(labels)
        pos, neg = lb.split_by_attribute(ds, j)
        assert pos.n + neg.n == ds.n
        assert np.all(pos.labels[:, j] == 1)
        assert np.all(neg.labels[:, j] == 0)


class TestSemanticDirection:
    def test_rejects_non_unit(self):
        with pytest.raises(ValueError, match="unit"):
            lb.SemanticDirection(attribute=0, vector=np.array([1.0, 1.0]), method="centroid")

    def test_rejects_unknown_method(self):
        with pytest.raises(ValueError, match="method"):
            lb.SemanticDirection(attribute=0, vector=np.array([1.0, 0.0]), method="pca")


def test_select_preserves_order_and_repeats():
    ds = tiny_dataset([[0, 0], [1, 0], [0, 1]])
    sub = ds.select([2, 0, 2])
    assert np.array_equal(sub.labels, [[0, 1], [0, 0], [0, 1]])


def test_dataset_arrays_are_readonly(dataset20k):
    with pytest.raises(ValueError):
        dataset20k.codes[0, 0] = 1.0
