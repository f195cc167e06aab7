"""Synthetic linear attribute world: a stand-in generator plus scorer.

The world plants m ground-truth unit vectors v_k in R^d whose pairwise
cosines match a requested Gram matrix, so inter-attribute correlation is
controlled exactly.  Latent codes are standard Gaussian; attribute k is
positive when <v_k, z> exceeds a bias b_k chosen so the marginal positive
rate is hit exactly (b_k = Phi^-1(1 - rate), as <v_k, z> is standard
normal).  Scores are logistic in the margin:

    score_k(z) = sigmoid(kappa * (<v_k, z> - b_k))

which makes score responses to edits exactly linear in logit space:
logit(score_k(z + a*u)) - logit(score_k(z)) = kappa * a * <v_k, u>.
Entanglement in this world is therefore pure direction misalignment, with
no scorer noise to hide behind.

Construction: a seeded Gaussian m x d matrix is orthonormalized (modified
Gram-Schmidt) into a frame E, and V = sqrt(Gram) @ E, so V V^T equals the
requested Gram.  Codes come from the portable SplitMix64 + inverse-CDF
pipeline in rng, so a given (world, n, seed) reproduces bit-identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .core import AttributeSchema, LatentDataset
from .directions import orthonormal_basis
from .rng import derive_seed, norm_ppf, normals

WORLD_SCHEMA_VERSION = 1

_STREAM_FRAME = 21
_STREAM_CODES = 22


@dataclass
class LinearAttributeWorld:
    dim: int
    vectors: np.ndarray          # m x d, unit rows
    biases: np.ndarray           # m
    sharpness: float             # logistic slope kappa
    seed: int
    gram: np.ndarray             # m x m, as requested
    rates: np.ndarray            # m marginal positive rates
    names: tuple[str, ...] = field(default_factory=tuple)

    @property
    def m(self) -> int:
        return self.vectors.shape[0]

    @property
    def schema(self) -> AttributeSchema:
        return AttributeSchema(self.names)

    def margins(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=np.float64)
        if z.shape[-1] != self.dim:
            raise ValueError(f"dimension mismatch: code d={z.shape[-1]}, world d={self.dim}")
        return z @ self.vectors.T - self.biases

    def logits(self, z: np.ndarray) -> np.ndarray:
        return self.sharpness * self.margins(z)

    def score(self, z: np.ndarray) -> np.ndarray:
        return _sigmoid(self.logits(z))


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def oracle_score(world: LinearAttributeWorld, z: np.ndarray) -> np.ndarray:
    return world.score(z)


def _sym_sqrt(gram: np.ndarray) -> np.ndarray:
    eigvals, eigvecs = np.linalg.eigh(gram)
    if eigvals.min() < -1e-10:
        raise ValueError(f"gram matrix is not positive semi-definite "
                         f"(min eigenvalue {eigvals.min():.3e})")
    return (eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))) @ eigvecs.T


def make_world(dim: int, m: int, gram: np.ndarray, positive_rates,
               sharpness: float = 1.0, seed: int = 0,
               names: tuple[str, ...] | None = None) -> LinearAttributeWorld:
    gram = np.asarray(gram, dtype=np.float64)
    rates = np.asarray(positive_rates, dtype=np.float64)
    if gram.shape != (m, m):
        raise ValueError(f"gram must be {m}x{m}, got {gram.shape}")
    if not np.allclose(gram, gram.T, atol=1e-12):
        raise ValueError("gram matrix must be symmetric")
    if not np.allclose(np.diag(gram), 1.0, atol=1e-12):
        raise ValueError("gram matrix must have unit diagonal")
    if dim < m:
        raise ValueError(f"dim ({dim}) must be >= m ({m})")
    if rates.shape != (m,) or np.any(rates <= 0.0) or np.any(rates >= 1.0):
        raise ValueError("positive_rates must be m values strictly inside (0, 1)")
    if sharpness <= 0:
        raise ValueError(f"sharpness must be positive, got {sharpness}")
    if names is None:
        names = tuple(f"attr{k}" for k in range(m))
    if len(names) != m:
        raise ValueError(f"expected {m} names, got {len(names)}")

    raw = normals(derive_seed(seed, _STREAM_FRAME), m * dim).reshape(m, dim)
    frame = orthonormal_basis(raw)
    if frame.shape[0] != m:
        raise ValueError("could not build an orthonormal frame (degenerate draw)")
    vectors = _sym_sqrt(gram) @ frame
    vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)

    biases = np.array([norm_ppf(1.0 - r) for r in rates])
    return LinearAttributeWorld(dim=dim, vectors=vectors, biases=biases,
                                sharpness=float(sharpness), seed=seed,
                                gram=gram, rates=rates, names=tuple(names))


def sample_world(world: LinearAttributeWorld, n: int, seed: int) -> LatentDataset:
    """n codes from the standard Gaussian prior, labeled and scored by the world."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    codes = normals(derive_seed(seed, _STREAM_CODES), n * world.dim).reshape(n, world.dim)
    margins = codes @ world.vectors.T - world.biases
    labels = (margins > 0).astype(np.uint8)
    confidences = np.abs(2.0 * _sigmoid(world.sharpness * margins) - 1.0)
    return LatentDataset(dim=world.dim, codes=codes, labels=labels,
                         schema=world.schema, confidences=confidences)


def default_world(seed: int = 0) -> LinearAttributeWorld:
    """The documented demo world: d=64, four attributes, two correlated pairs.

    Cosine 0.6 between attributes (0,1) and (2,3), marginal positive rates
    (0.5, 0.3, 0.5, 0.2), sharpness 1 - a compact imitation of the skewed
    joint distributions real generators exhibit.
    """
    gram = np.eye(4)
    gram[0, 1] = gram[1, 0] = 0.6
    gram[2, 3] = gram[3, 2] = 0.6
    return make_world(dim=64, m=4, gram=gram, positive_rates=(0.5, 0.3, 0.5, 0.2),
                      sharpness=1.0, seed=seed)


def world_to_dict(world: LinearAttributeWorld) -> dict:
    return {
        "schema_version": WORLD_SCHEMA_VERSION,
        "dim": world.dim,
        "names": list(world.names),
        "vectors": [[float(x) for x in row] for row in world.vectors],
        "biases": [float(b) for b in world.biases],
        "gram": [[float(x) for x in row] for row in world.gram],
        "rates": [float(r) for r in world.rates],
        "sharpness": world.sharpness,
        "seed": world.seed,
    }


def world_from_dict(obj: dict) -> LinearAttributeWorld:
    if obj.get("schema_version") != WORLD_SCHEMA_VERSION:
        raise ValueError(f"unsupported world schema_version {obj.get('schema_version')!r}")
    return LinearAttributeWorld(
        dim=int(obj["dim"]),
        vectors=np.asarray(obj["vectors"], dtype=np.float64),
        biases=np.asarray(obj["biases"], dtype=np.float64),
        sharpness=float(obj["sharpness"]),
        seed=int(obj["seed"]),
        gram=np.asarray(obj["gram"], dtype=np.float64),
        rates=np.asarray(obj["rates"], dtype=np.float64),
        names=tuple(obj["names"]),
    )


def save_world(world: LinearAttributeWorld, path: str) -> None:
    from .dataio import atomic_write_text

    atomic_write_text(path, json.dumps(world_to_dict(world), indent=2) + "\n")


def load_world(path: str) -> LinearAttributeWorld:
    with open(path) as f:
        return world_from_dict(json.load(f))
