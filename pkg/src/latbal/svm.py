"""Soft-margin linear SVM trained by dual coordinate descent.

Solves the L1-hinge primal

    min_w  1/2 ||w||^2 + C * sum_i max(0, 1 - y_i (w . x_i + b))

through its dual, one exact single-variable update per example (Hsieh et
al., ICML 2008), with a random example permutation each epoch.  The bias is
folded in as a constant feature of value 1, which perturbs the geometric
bias slightly at small C; downstream consumers only use the normal
direction, where the effect is negligible.

Convergence is declared on the true duality gap: the primal objective above
minus the dual objective sum(alpha) - 1/2 ||w||^2, evaluated after each
epoch.

Examples are canonically reordered (sorted by coordinate bytes, then label)
before training, so the fit depends on the two point sets and not on the
order they were supplied in.  A useful consequence: swapping the positive
and negative sets negates weights and bias exactly, bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rng import SplitMix64, derive_seed

_STREAM_EPOCH = 11


@dataclass
class SvmModel:
    weights: np.ndarray
    bias: float
    c: float
    duality_gap: float
    iterations: int              # epochs completed
    converged: bool              # duality_gap <= tol before hitting max_iter
    hinge_loss: float            # total hinge at the returned iterate
    alphas: np.ndarray           # dual variables, canonical example order
    objective_history: list[float] = field(default_factory=list)  # primal per epoch
    dual_history: list[float] = field(default_factory=list)       # dual per epoch

    def decision(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=np.float64) @ self.weights + self.bias


def canonical_order(x: np.ndarray, y: np.ndarray) -> list[int]:
    """Content-based example order: by coordinate bytes, label as tie-break."""
    return sorted(range(x.shape[0]), key=lambda i: (x[i].tobytes(), y[i]))


def train_svm(pos: np.ndarray, neg: np.ndarray, c: float = 1.0, tol: float = 1e-6,
              max_iter: int = 1000, seed: int = 0) -> SvmModel:
    pos = np.atleast_2d(np.asarray(pos, dtype=np.float64))
    neg = np.atleast_2d(np.asarray(neg, dtype=np.float64))
    if pos.shape[0] == 0 or neg.shape[0] == 0:
        raise ValueError("both classes must be non-empty")
    if pos.shape[1] != neg.shape[1]:
        raise ValueError(f"dimension mismatch: pos d={pos.shape[1]}, neg d={neg.shape[1]}")
    if c <= 0:
        raise ValueError(f"C must be positive, got {c}")

    d = pos.shape[1]
    x_raw = np.vstack([pos, neg])
    y_raw = np.concatenate([np.ones(pos.shape[0]), -np.ones(neg.shape[0])])

    order = canonical_order(x_raw, y_raw)
    x = np.ascontiguousarray(np.hstack([x_raw[order], np.ones((x_raw.shape[0], 1))]))
    y = y_raw[order]
    n = x.shape[0]

    q_diag = (x * x).sum(axis=1)  # >= 1 thanks to the bias feature
    alpha = np.zeros(n)
    w = np.zeros(d + 1)

    gap = np.inf
    hinge = np.inf
    primal_history: list[float] = []
    dual_history: list[float] = []
    epochs = 0
    converged = False

    for epoch in range(max_iter):
        perm_rng = SplitMix64(derive_seed(seed, _STREAM_EPOCH, epoch))
        for i in perm_rng.permutation(n):
            g = y[i] * (x[i] @ w) - 1.0
            a = alpha[i]
            if (a <= 0.0 and g >= 0.0) or (a >= c and g <= 0.0):
                continue
            a_new = min(max(a - g / q_diag[i], 0.0), c)
            if a_new != a:
                w += (a_new - a) * y[i] * x[i]
                alpha[i] = a_new
        epochs = epoch + 1

        margins = 1.0 - y * (x @ w)
        hinge = float(np.clip(margins, 0.0, None).sum())
        w_sq = float(w @ w)
        primal = 0.5 * w_sq + c * hinge
        dual = float(alpha.sum()) - 0.5 * w_sq
        gap = max(primal - dual, 0.0)
        primal_history.append(primal)
        dual_history.append(dual)
        if gap <= tol:
            converged = True
            break

    return SvmModel(
        weights=w[:d].copy(),
        bias=float(w[d]),
        c=c,
        duality_gap=float(gap),
        iterations=epochs,
        converged=converged,
        hinge_loss=hinge,
        alphas=alpha,
        objective_history=primal_history,
        dual_history=dual_history,
    )
