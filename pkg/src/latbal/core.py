"""Domain types: attribute schemas, labeled latent datasets, directions.

A dataset is N latent codes in R^d plus an N x m binary label matrix (one
column per attribute) and optional per-label confidences.  Datasets are
treated as immutable after construction: the arrays are flagged read-only
and every operation returns a new dataset, so concurrent readers are safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

MAX_ATTRIBUTES = 20  # contingency tables are dense over 2^m cells

DIRECTION_METHODS = ("centroid", "svm", "conditional")


@dataclass(frozen=True)
class AttributeSchema:
    """Ordered list of named binary attributes."""

    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        object.__setattr__(self, "names", names)
        if not 1 <= len(names) <= MAX_ATTRIBUTES:
            raise ValueError(
                f"attribute count must be in [1, {MAX_ATTRIBUTES}], got {len(names)}")
        if len(set(names)) != len(names):
            raise ValueError("attribute names must be unique")
        if any(not n for n in names):
            raise ValueError("attribute names must be non-empty")

    @property
    def m(self) -> int:
        return len(self.names)

    def index_of(self, name: str) -> int:
        return self.names.index(name)


def encode_bits(bits: Sequence[int]) -> int:
    """Cell index for a bit-vector; attribute 0 is the least significant bit."""
    index = 0
    for j, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"bit {j} is {b}, expected 0 or 1")
        index |= int(b) << j
    return index


def decode_index(index: int, m: int) -> tuple[int, ...]:
    """Inverse of encode_bits for m attributes."""
    if not 0 <= index < (1 << m):
        raise ValueError(f"index {index} out of range for m={m}")
    return tuple((index >> j) & 1 for j in range(m))


@dataclass(frozen=True)
class LabelCombination:
    """One cell of the label contingency table."""

    bits: tuple[int, ...]
    index: int

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "LabelCombination":
        bits = tuple(int(b) for b in bits)
        return cls(bits=bits, index=encode_bits(bits))

    @classmethod
    def from_index(cls, index: int, m: int) -> "LabelCombination":
        return cls(bits=decode_index(index, m), index=index)


@dataclass
class LatentDataset:
    """N latent codes with per-code binary labels and optional confidences."""

    dim: int
    codes: np.ndarray
    labels: np.ndarray
    schema: AttributeSchema
    confidences: Optional[np.ndarray] = None

    def __post_init__(self):
        self.codes = np.ascontiguousarray(self.codes, dtype=np.float64)
        self.labels = np.ascontiguousarray(self.labels, dtype=np.uint8)
        if self.confidences is not None:
            self.confidences = np.ascontiguousarray(self.confidences, dtype=np.float64)
        for arr in (self.codes, self.labels, self.confidences):
            if arr is not None:
                arr.setflags(write=False)

    @property
    def n(self) -> int:
        return self.codes.shape[0]

    @property
    def m(self) -> int:
        return self.schema.m

    def select(self, indices) -> "LatentDataset":
        """New dataset holding the given rows, in the given order (repeats allowed)."""
        idx = np.asarray(indices, dtype=np.int64)
        return LatentDataset(
            dim=self.dim,
            codes=self.codes[idx],
            labels=self.labels[idx],
            schema=self.schema,
            confidences=None if self.confidences is None else self.confidences[idx],
        )


@dataclass(frozen=True)
class SemanticDirection:
    """Unit vector controlling one attribute, with fit provenance in meta."""

    attribute: int
    vector: np.ndarray
    method: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        vec = np.ascontiguousarray(self.vector, dtype=np.float64)
        vec.setflags(write=False)
        object.__setattr__(self, "vector", vec)
        if self.method not in DIRECTION_METHODS:
            raise ValueError(f"unknown direction method {self.method!r}")
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"direction vector must be unit-norm, got ||v|| = {norm!r}")

    @property
    def dim(self) -> int:
        return self.vector.shape[0]


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_dataset(dataset: LatentDataset) -> ValidationReport:
    """Check every dataset invariant; returns a report instead of raising."""
    v: list[str] = []
    codes, labels, conf = dataset.codes, dataset.labels, dataset.confidences
    m = dataset.m

    if codes.ndim != 2:
        v.append(f"codes must be 2-d, got ndim={codes.ndim}")
        return ValidationReport(v)
    n = codes.shape[0]
    if dataset.dim <= 0:
        v.append(f"dim must be positive, got {dataset.dim}")
    if codes.shape[1] != dataset.dim:
        v.append(f"codes have width {codes.shape[1]}, declared dim {dataset.dim}")

    finite = np.isfinite(codes).all(axis=1) if codes.size else np.ones(n, dtype=bool)
    for row in np.flatnonzero(~finite):
        v.append(f"codes row {row}: non-finite component")

    if labels.ndim != 2 or labels.shape[1] != m:
        v.append(f"labels must have shape (N, {m}), got {labels.shape}")
    elif labels.shape[0] != n:
        v.append(f"row-count mismatch: {n} codes vs {labels.shape[0]} label rows")
    else:
        bad = np.flatnonzero((labels > 1).any(axis=1))
        for row in bad:
            v.append(f"labels row {row}: value outside {{0, 1}}")

    if conf is not None:
        if conf.shape != (n, m):
            v.append(f"confidences must have shape ({n}, {m}), got {conf.shape}")
        else:
            ok_rows = np.isfinite(conf).all(axis=1) & (conf >= 0.0).all(axis=1) & (conf <= 1.0).all(axis=1)
            for row in np.flatnonzero(~ok_rows):
                v.append(f"confidences row {row}: value outside [0, 1]")

    return ValidationReport(v)


def filter_by_confidence(dataset: LatentDataset, threshold: float) -> LatentDataset:
    """Keep rows whose confidences meet the threshold for every attribute."""
    if dataset.confidences is None:
        raise ValueError("dataset has no confidences to filter on")
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    keep = np.flatnonzero((dataset.confidences >= threshold).all(axis=1))
    return dataset.select(keep)


def split_by_attribute(dataset: LatentDataset, j: int) -> tuple[LatentDataset, LatentDataset]:
    """Partition into (positive, negative) subsets for attribute j."""
    if not 0 <= j < dataset.m:
        raise IndexError(f"attribute index {j} out of range for m={dataset.m}")
    mask = dataset.labels[:, j] == 1
    return dataset.select(np.flatnonzero(mask)), dataset.select(np.flatnonzero(~mask))
