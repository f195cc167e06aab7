import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import latbal as lb
from latbal.sampler import read_subsample_indices, write_subsample
from conftest import tiny_dataset


def _dataset_with_cells(per_cell: dict[tuple[int, int], int]):
    """m=2 dataset whose cells hold the given number of rows."""
    rows = []
    for bits, count in per_cell.items():
        rows.extend([list(bits)] * count)
    return tiny_dataset(rows)


def _prepared(per_cell):
    ds = _dataset_with_cells(per_cell)
    return ds, lb.build_contingency(ds)


class TestBalancedSubsample:
    def test_rich_cells_draw_full_quota(self):
        # every cell holds far more than its expected quota: no skips possible
        ds, table = _prepared({(0, 0): 2000, (1, 0): 2000, (0, 1): 2000, (1, 1): 2000})
        res = lb.balanced_subsample(ds, table, lb.SamplePlan(1000, "skip", 42))
        assert res.size == 1000
        assert res.skipped_iterations == 0
        # multinomial(1000, 1/4): 250 +- 41 at 3 sigma
        assert all(200 <= c <= 300 for c in res.per_cell_counts)
        assert len(set(res.indices.tolist())) == res.size

    def test_supply_equal_to_demand_exhausts(self):
        # total supply == n0: some cell overflows its quota almost surely, and
        # skip forfeits those draws, so the result is a bit short of n0
        ds, table = _prepared({(0, 0): 250, (1, 0): 250, (0, 1): 250, (1, 1): 250})
        res = lb.balanced_subsample(ds, table, lb.SamplePlan(1000, "skip", 42))
        assert res.size + res.skipped_iterations == 1000
        assert all(res.per_cell_counts[c] <= table.counts[c] for c in range(4))
        assert len(set(res.indices.tolist())) == res.size

    def test_oversample_fills_quota_with_duplicates(self):
        ds, table = _prepared({(0, 0): 1000, (1, 0): 1000, (0, 1): 1000, (1, 1): 3})
        res = lb.balanced_subsample(ds, table, lb.SamplePlan(1000, "oversample", 42))
        assert res.size == 1000
        rare_rows = set(table.members[3].tolist())
        drawn_rare = [i for i in res.indices.tolist() if i in rare_rows]
        assert len(drawn_rare) > len(rare_rows)  # pigeonhole: duplicates exist

    def test_empty_cell_skips_under_both_policies(self):
        # m=1, one cell empty, the other holds exactly 8 rows
        ds = tiny_dataset([[1]] * 8)
        table = lb.build_contingency(ds)
        for policy in ("skip", "oversample"):
            res = lb.balanced_subsample(ds, table, lb.SamplePlan(8, policy, 42))
            assert res.size + res.skipped_iterations == 8
            assert res.per_cell_counts[0] == 0
            if policy == "skip":
                assert len(set(res.indices.tolist())) == res.size

    def test_fully_empty_dataset(self):
        ds = tiny_dataset(np.zeros((0, 2), np.uint8))
        table = lb.build_contingency(ds)
        for policy in ("skip", "oversample"):
            res = lb.balanced_subsample(ds, table, lb.SamplePlan(5, policy, 0))
            assert res.size == 0
            assert res.skipped_iterations == 5

    def test_deterministic(self, dataset20k):
        table = lb.build_contingency(dataset20k)
        plan = lb.SamplePlan(500, "skip", 7)
        a = lb.balanced_subsample(dataset20k, table, plan)
        b = lb.balanced_subsample(dataset20k, table, plan)
        assert np.array_equal(a.indices, b.indices)
        assert np.array_equal(a.per_cell_counts, b.per_cell_counts)

    @given(seed=st.integers(0, 2**32))
    @settings(max_examples=20, deadline=None)
    def test_skip_never_repeats_and_respects_supply(self, seed):
        ds, table = _prepared({(0, 0): 9, (1, 0): 2, (0, 1): 5, (1, 1): 0})
        res = lb.balanced_subsample(ds, table, lb.SamplePlan(30, "skip", seed))
        idx = res.indices.tolist()
        assert len(set(idx)) == len(idx)
        assert all(res.per_cell_counts[c] <= table.counts[c] for c in range(4))
        assert res.per_cell_counts.sum() == res.size
        assert res.size + res.skipped_iterations == 30

    @given(seed=st.integers(0, 2**32))
    @settings(max_examples=20, deadline=None)
    def test_oversample_hits_n0_when_no_cell_is_empty(self, seed):
        ds, table = _prepared({(0, 0): 9, (1, 0): 2, (0, 1): 5, (1, 1): 1})
        res = lb.balanced_subsample(ds, table, lb.SamplePlan(40, "oversample", seed))
        assert res.size == 40
        assert res.per_cell_counts.sum() == 40

    def test_per_cell_mean_is_uniform_across_seeds(self):
        # every cell holds >= n0 rows: expected count per cell is n0/4; the
        # mean over 100 seeds must sit within 5% of it
        ds, table = _prepared({(0, 0): 400, (1, 0): 400, (0, 1): 400, (1, 1): 400})
        totals = np.zeros(4)
        for seed in range(100):
            res = lb.balanced_subsample(ds, table, lb.SamplePlan(400, "skip", seed))
            totals += res.per_cell_counts
        means = totals / 100
        assert np.all(np.abs(means - 100.0) < 5.0)

    def test_provenance_recorded(self, dataset20k):
        table = lb.build_contingency(dataset20k)
        res = lb.balanced_subsample(dataset20k, table, lb.SamplePlan(100, "skip", 1))
        assert res.meta["rng"] == "splitmix64-counter-v1"
        assert res.meta["policy"] == "skip"

    def test_plan_validation(self):
        with pytest.raises(ValueError):
            lb.SamplePlan(0, "skip", 1)
        with pytest.raises(ValueError):
            lb.SamplePlan(10, "refill", 1)


class TestUniformSubsample:
    def test_full_draw_selects_every_row(self):
        ds = tiny_dataset([[0, 0]] * 50)
        res = lb.uniform_subsample(ds, 50, seed=3)
        assert sorted(res.indices.tolist()) == list(range(50))

    def test_empty_draw(self):
        ds = tiny_dataset([[0, 0]] * 10)
        res = lb.uniform_subsample(ds, 0, seed=3)
        assert res.size == 0

    def test_oversize_rejected(self):
        ds = tiny_dataset([[0, 0]] * 10)
        with pytest.raises(ValueError):
            lb.uniform_subsample(ds, 11, seed=3)

    def test_distinct_and_deterministic(self, dataset20k):
        a = lb.uniform_subsample(dataset20k, 1000, seed=5)
        b = lb.uniform_subsample(dataset20k, 1000, seed=5)
        assert np.array_equal(a.indices, b.indices)
        assert len(set(a.indices.tolist())) == 1000
        assert lb.uniform_subsample(dataset20k, 1000, seed=6).indices.tolist() != a.indices.tolist()

    def test_reproduces_source_imbalance(self):
        # cos(v0, v1) = 0.8 world: agreeing cells hold ~80% of the mass, so a
        # uniform subsample stays strongly imbalanced
        gram = np.array([[1.0, 0.8], [0.8, 1.0]])
        world = lb.make_world(dim=16, m=2, gram=gram, positive_rates=(0.5, 0.5), seed=42)
        ds = lb.sample_world(world, 50_000, seed=42)
        res = lb.uniform_subsample(ds, 1000, seed=42)
        counts = res.per_cell_counts
        assert counts.max() / counts[counts > 0].min() >= 3.0


def test_subsample_files_roundtrip(tmp_path, dataset20k):
    table = lb.build_contingency(dataset20k)
    res = lb.balanced_subsample(dataset20k, table, lb.SamplePlan(200, "skip", 9))
    base = str(tmp_path / "sub")
    csv_path, json_path = write_subsample(res, base)
    assert np.array_equal(read_subsample_indices(csv_path), res.indices)
    import json
    sidecar = json.loads((tmp_path / "sub.json").read_text())
    assert sidecar["policy"] == "skip"
    assert sidecar["per_cell_counts"] == res.per_cell_counts.tolist()
    assert sidecar["skipped_iterations"] == res.skipped_iterations
