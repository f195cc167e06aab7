import numpy as np
import pytest

import latbal as lb
from latbal.rng import derive_seed, normals
from latbal.svm import canonical_order, train_svm


def _blobs(n_per_side=500, d=64, half_gap=2.0, seed=7):
    """Two Gaussian blobs at +-mu with ||2 mu|| = 2 * half_gap * ... fixed geometry."""
    mu = np.full(d, half_gap / np.sqrt(d))
    z = normals(derive_seed(seed, 103), 2 * n_per_side * d).reshape(2 * n_per_side, d)
    return z[:n_per_side] + mu, z[n_per_side:] - mu


@pytest.fixture(scope="module")
def blobs_model():
    pos, neg = _blobs()
    return pos, neg, train_svm(pos, neg, c=1.0, tol=1e-4, max_iter=1000, seed=7)


def test_symmetric_separable_case():
    pos = np.array([[1.0, 0.0], [1.0, 1.0]])
    neg = np.array([[-1.0, 0.0], [-1.0, 1.0]])
    model = train_svm(pos, neg, c=1.0, tol=1e-8, max_iter=2000, seed=0)
    w = model.weights / np.linalg.norm(model.weights)
    assert np.allclose(w, [1.0, 0.0], atol=1e-6)
    assert abs(model.bias) < 1e-6
    assert model.hinge_loss < 1e-9
    assert model.converged


def test_degenerate_identical_point_both_classes():
    point = np.array([[1.0, 2.0]])
    model = train_svm(point, point, c=1.0, tol=1e-8, max_iter=100, seed=0)
    assert np.linalg.norm(model.weights) < 1e-9
    assert model.hinge_loss >= 1.0  # non-separable shows up as residual hinge loss
    assert model.converged


def test_blob_training_accuracy(blobs_model):
    # means +-mu with ||2 mu|| = 4: Bayes accuracy Phi(2) ~ 0.977
    pos, neg, model = blobs_model
    x = np.vstack([pos, neg])
    y = np.concatenate([np.ones(len(pos)), -np.ones(len(neg))])
    accuracy = (np.sign(model.decision(x)) == y).mean()
    assert accuracy >= 0.97


def _slackness_residual(pos, neg, model):
    x_raw = np.vstack([pos, neg])
    y_raw = np.concatenate([np.ones(len(pos)), -np.ones(len(neg))])
    order = canonical_order(x_raw, y_raw)
    f = model.decision(x_raw[order])
    y = y_raw[order]
    s = y * f - 1.0
    # complementary slackness: alpha * max(0, yf-1) and (C-alpha) * max(0, 1-yf)
    r1 = model.alphas * np.clip(s, 0.0, None)
    r2 = (model.c - model.alphas) * np.clip(-s, 0.0, None)
    return float((r1 + r2).sum())


def test_alpha_bounds_and_slackness_identity(blobs_model):
    pos, neg, model = blobs_model
    assert np.all(model.alphas >= 0.0) and np.all(model.alphas <= model.c)
    # the total slackness residual IS the duality gap
    assert _slackness_residual(pos, neg, model) == pytest.approx(model.duality_gap, abs=1e-8)


def test_kkt_residual_below_tol_at_convergence():
    pos, neg = _blobs(n_per_side=150)
    model = train_svm(pos, neg, c=1.0, tol=1e-6, max_iter=4000, seed=7)
    assert model.converged
    assert np.all(model.alphas >= 0.0) and np.all(model.alphas <= model.c)
    assert _slackness_residual(pos, neg, model) <= 1e-6 + 1e-9


def test_duality_gap_certifies_convergence():
    pos, neg = _blobs(n_per_side=150)
    model = train_svm(pos, neg, c=1.0, tol=1e-6, max_iter=4000, seed=7)
    assert model.converged
    assert model.duality_gap <= 1e-6
    # weak duality throughout
    assert all(p >= d - 1e-9 for p, d in zip(model.objective_history, model.dual_history))


def test_dual_objective_is_nondecreasing(blobs_model):
    # exact single-variable maximization makes the dual monotone (up to rounding);
    # the primal evaluated at w(alpha) is not monotone for this solver
    _, _, model = blobs_model
    dual = np.array(model.dual_history)
    assert np.all(np.diff(dual) >= -1e-10 * max(1.0, np.abs(dual).max()))


def test_label_swap_negates_exactly():
    pos, neg = _blobs(n_per_side=60)
    a = train_svm(pos, neg, c=0.5, tol=1e-8, max_iter=300, seed=3)
    b = train_svm(neg, pos, c=0.5, tol=1e-8, max_iter=300, seed=3)
    assert np.array_equal(a.weights, -b.weights)
    assert a.bias == -b.bias
    assert a.duality_gap == b.duality_gap


def test_fit_is_order_independent():
    pos, neg = _blobs(n_per_side=40)
    a = train_svm(pos, neg, c=1.0, tol=1e-8, max_iter=300, seed=1)
    b = train_svm(pos[::-1], neg[::-1], c=1.0, tol=1e-8, max_iter=300, seed=1)
    assert np.array_equal(a.weights, b.weights)
    assert a.bias == b.bias


def test_separable_large_c_drives_hinge_to_zero():
    pos, neg = _blobs(n_per_side=50, half_gap=4.0)  # wide gap: cleanly separable
    model = train_svm(pos, neg, c=100.0, tol=1e-6, max_iter=3000, seed=2)
    assert model.hinge_loss < 1e-8


def test_small_c_limit_matches_centroid_direction(world42):
    # balanced classes, C -> 0: all alphas saturate at C, so w is proportional
    # to the difference of class sums; with equal class sizes that is the
    # centroid difference
    ds = lb.sample_world(world42, 20_000, seed=5)
    table = lb.build_contingency(ds)
    res = lb.balanced_subsample(ds, table, lb.SamplePlan(1000, "skip", 5))
    sub = ds.select(res.indices)
    for j in range(4):
        pos, neg = lb.split_by_attribute(sub, j)
        k = min(pos.n, neg.n)
        centroid = lb.centroid_direction(pos.codes[:k], neg.codes[:k], j)
        svm_dir = lb.svm_direction(pos.codes[:k], neg.codes[:k], j,
                                   c=1e-6, tol=1e-9, max_iter=50, seed=9)
        assert float(centroid.vector @ svm_dir.vector) >= 0.999


@pytest.mark.parametrize("pos,neg,err", [
    (np.empty((0, 2)), np.array([[1.0, 2.0]]), "non-empty"),
    (np.array([[1.0, 2.0]]), np.empty((0, 2)), "non-empty"),
    (np.array([[1.0, 2.0]]), np.array([[1.0, 2.0, 3.0]]), "dimension"),
])
def test_input_validation(pos, neg, err):
    with pytest.raises(ValueError, match=err):
        train_svm(pos, neg)


def test_c_must_be_positive():
    x = np.array([[1.0]])
    with pytest.raises(ValueError, match="positive"):
        train_svm(x, -x, c=0.0)
