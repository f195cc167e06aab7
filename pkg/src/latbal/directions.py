"""Attribute direction estimation, projection, and latent editing.

Two estimators produce a unit direction for an attribute: the normalized
difference of class centroids, and the normal of a linear SVM boundary.
The SVM normal is oriented so the positive-class centroid sits on its
positive side, fixing the sign ambiguity of a hyperplane normal.

conditional_project removes from a direction its component in the span of
other attributes' directions (modified Gram-Schmidt, re-orthogonalized),
yielding an edit that leaves those attributes' scores unchanged to first
order.
"""

from __future__ import annotations

import json

import numpy as np

from .core import SemanticDirection
from .svm import train_svm

DIRECTION_SCHEMA_VERSION = 1


def _as_matrix(vectors) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    return arr


def centroid_direction(pos, neg, j: int) -> SemanticDirection:
    """Unit vector from the negative-class centroid toward the positive one."""
    pos = _as_matrix(pos)
    neg = _as_matrix(neg)
    if pos.shape[0] == 0 or neg.shape[0] == 0:
        raise ValueError("both classes must be non-empty")
    if pos.shape[1] != neg.shape[1]:
        raise ValueError(f"dimension mismatch: pos d={pos.shape[1]}, neg d={neg.shape[1]}")
    diff = pos.mean(axis=0) - neg.mean(axis=0)
    norm = float(np.linalg.norm(diff))
    if norm < 1e-12:
        raise ValueError("class centroids coincide; no direction defined")
    return SemanticDirection(
        attribute=j,
        vector=diff / norm,
        method="centroid",
        meta={"n_pos": int(pos.shape[0]), "n_neg": int(neg.shape[0]), "raw_norm": norm},
    )


def svm_direction(pos, neg, j: int, c: float = 1.0, tol: float = 1e-6,
                  max_iter: int = 1000, seed: int = 0) -> SemanticDirection:
    """Unit normal of the SVM decision boundary, positive class on the + side."""
    pos = _as_matrix(pos)
    neg = _as_matrix(neg)
    model = train_svm(pos, neg, c=c, tol=tol, max_iter=max_iter, seed=seed)
    norm = float(np.linalg.norm(model.weights))
    if norm < 1e-12:
        raise ValueError("SVM weight vector is numerically zero; no direction defined")
    u = model.weights / norm
    if (pos.mean(axis=0) - neg.mean(axis=0)) @ u < 0:
        u = -u
    return SemanticDirection(
        attribute=j,
        vector=u,
        method="svm",
        meta={"c": c, "duality_gap": model.duality_gap, "iterations": model.iterations,
              "converged": model.converged, "seed": seed,
              "n_pos": int(pos.shape[0]), "n_neg": int(neg.shape[0])},
    )


def orthonormal_basis(vectors: np.ndarray, drop_tol: float = 1e-12) -> np.ndarray:
    """Modified Gram-Schmidt with re-orthogonalization; drops dependent rows."""
    basis: list[np.ndarray] = []
    for v in _as_matrix(vectors):
        u = v.astype(np.float64).copy()
        for _ in range(2):  # second pass mops up cancellation error
            for b in basis:
                u -= (u @ b) * b
        norm = float(np.linalg.norm(u))
        if norm > drop_tol * max(1.0, float(np.linalg.norm(v))):
            basis.append(u / norm)
    return np.array(basis) if basis else np.empty((0, vectors.shape[1]))


def conditional_project(target: SemanticDirection,
                        others: list[SemanticDirection]) -> SemanticDirection:
    """Project target onto the orthogonal complement of the other directions."""
    if not others:
        raise ValueError("need at least one other direction to project against")
    dims = {target.dim} | {o.dim for o in others}
    if len(dims) != 1:
        raise ValueError(f"direction dimensions disagree: {sorted(dims)}")
    basis = orthonormal_basis(np.array([o.vector for o in others]))
    u = target.vector.copy()
    for _ in range(2):
        for b in basis:
            u -= (u @ b) * b
    norm = float(np.linalg.norm(u))
    if norm < 1e-10:
        raise ValueError("target direction lies in the span of the others")
    return SemanticDirection(
        attribute=target.attribute,
        vector=u / norm,
        method="conditional",
        meta={"parents": [o.attribute for o in others],
              "source_method": target.method, "residual_norm": norm},
    )


def edit_latent(z: np.ndarray, direction: SemanticDirection, alpha: float) -> np.ndarray:
    """z + alpha * u, for a single code or a batch of codes."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape[-1] != direction.dim:
        raise ValueError(f"dimension mismatch: code d={z.shape[-1]}, direction d={direction.dim}")
    return z + alpha * direction.vector


def cosine_matrix(directions: list[SemanticDirection]) -> np.ndarray:
    """Pairwise cosines; directions are unit vectors so this is just the Gram."""
    if not directions:
        return np.empty((0, 0))
    dims = {d.dim for d in directions}
    if len(dims) != 1:
        raise ValueError(f"direction dimensions disagree: {sorted(dims)}")
    v = np.array([d.vector for d in directions])
    return v @ v.T


def direction_to_dict(direction: SemanticDirection) -> dict:
    return {
        "schema_version": DIRECTION_SCHEMA_VERSION,
        "attribute": direction.attribute,
        "method": direction.method,
        "dim": direction.dim,
        "vector": [float(x) for x in direction.vector],
        "meta": direction.meta,
    }


def direction_from_dict(obj: dict) -> SemanticDirection:
    if obj.get("schema_version") != DIRECTION_SCHEMA_VERSION:
        raise ValueError(f"unsupported direction schema_version {obj.get('schema_version')!r}")
    vec = np.asarray(obj["vector"], dtype=np.float64)
    if vec.shape[0] != obj["dim"]:
        raise ValueError(f"vector length {vec.shape[0]} disagrees with dim {obj['dim']}")
    return SemanticDirection(
        attribute=int(obj["attribute"]),
        vector=vec,
        method=obj["method"],
        meta=dict(obj.get("meta", {})),
    )


def save_direction(direction: SemanticDirection, path: str) -> None:
    from .dataio import atomic_write_text

    atomic_write_text(path, json.dumps(direction_to_dict(direction), indent=2) + "\n")


def load_direction(path: str) -> SemanticDirection:
    with open(path) as f:
        return direction_from_dict(json.load(f))
