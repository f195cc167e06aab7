"""Multi-attribute balanced subsampling, plus the uniform baseline.

Balanced sampling iterates exactly n0 times.  Each iteration first draws a
cell uniformly over all 2^m cells, then draws one member of that cell
uniformly without replacement.  When a drawn cell has no members left:

  skip        the iteration is forfeited (counted in skipped_iterations),
              so the result can hold fewer than n0 indices;
  oversample  the draw falls back to sampling with replacement from the
              cell's full member list.  Cells that still have unused
              members keep drawing without replacement.  A cell that is
              empty in the source has nothing to resample, so those draws
              are skipped under either policy.

Randomness: one SplitMix64 stream for cell draws and one per cell for
member draws, all derived from the plan seed (see rng.derive_seed).
Without-replacement draws use an in-place partial Fisher-Yates shuffle of
a copy of the member list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .contingency import ContingencyTable, cell_indices
from .core import LatentDataset
from .rng import ALGORITHM, SplitMix64, derive_seed

POLICIES = ("skip", "oversample")

_STREAM_CELLS = 1
_STREAM_MEMBERS = 2
_STREAM_UNIFORM = 3


@dataclass(frozen=True)
class SamplePlan:
    n0: int
    policy: str
    seed: int

    def __post_init__(self):
        if self.n0 < 1:
            raise ValueError(f"n0 must be >= 1, got {self.n0}")
        if self.policy not in POLICIES:
            raise ValueError(f"policy must be one of {POLICIES}, got {self.policy!r}")


@dataclass
class SubsampleResult:
    indices: np.ndarray           # dataset row indices, draw order
    per_cell_counts: np.ndarray
    skipped_iterations: int
    meta: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return int(self.indices.shape[0])


def balanced_subsample(dataset: LatentDataset, table: ContingencyTable,
                       plan: SamplePlan) -> SubsampleResult:
    n_cells = table.n_cells
    pools = [cell.tolist() for cell in table.members]
    used = [0] * n_cells

    cell_rng = SplitMix64(derive_seed(plan.seed, _STREAM_CELLS))
    member_rngs: dict[int, SplitMix64] = {}

    indices: list[int] = []
    per_cell = np.zeros(n_cells, dtype=np.int64)
    skipped = 0

    for _ in range(plan.n0):
        c = cell_rng.below(n_cells)
        pool = pools[c]
        size = len(pool)
        if used[c] < size:
            rng = member_rngs.get(c)
            if rng is None:
                rng = member_rngs[c] = SplitMix64(derive_seed(plan.seed, _STREAM_MEMBERS, c))
            # partial Fisher-Yates: swap a not-yet-used entry into position used[c]
            r = used[c] + rng.below(size - used[c])
            pool[r], pool[used[c]] = pool[used[c]], pool[r]
            pick = pool[used[c]]
            used[c] += 1
        elif plan.policy == "oversample" and size > 0:
            rng = member_rngs.get(c)
            if rng is None:
                rng = member_rngs[c] = SplitMix64(derive_seed(plan.seed, _STREAM_MEMBERS, c))
            pick = pool[rng.below(size)]
        else:
            skipped += 1
            continue
        indices.append(pick)
        per_cell[c] += 1

    return SubsampleResult(
        indices=np.asarray(indices, dtype=np.int64),
        per_cell_counts=per_cell,
        skipped_iterations=skipped,
        meta={"kind": "balanced", "n0": plan.n0, "policy": plan.policy,
              "seed": plan.seed, "rng": ALGORITHM},
    )


def uniform_subsample(dataset: LatentDataset, n0: int, seed: int) -> SubsampleResult:
    """n0 distinct rows drawn uniformly without replacement."""
    n = dataset.n
    if n0 < 0 or n0 > n:
        raise ValueError(f"n0 must be in [0, {n}], got {n0}")
    rng = SplitMix64(derive_seed(seed, _STREAM_UNIFORM))

    # sparse partial Fisher-Yates over [0, N)
    swapped: dict[int, int] = {}
    out = np.empty(n0, dtype=np.int64)
    for t in range(n0):
        r = t + rng.below(n - t)
        out[t] = swapped.get(r, r)
        swapped[r] = swapped.get(t, t)

    cells = cell_indices(dataset)[out] if n0 else np.empty(0, dtype=np.int64)
    per_cell = np.bincount(cells, minlength=1 << dataset.m).astype(np.int64)
    return SubsampleResult(
        indices=out,
        per_cell_counts=per_cell,
        skipped_iterations=0,
        meta={"kind": "uniform", "n0": n0, "seed": seed, "rng": ALGORITHM},
    )


def write_subsample(result: SubsampleResult, path_base: str) -> tuple[str, str]:
    """CSV of draws plus a JSON sidecar with plan and per-cell counts."""
    from .dataio import atomic_write_text

    csv_path = path_base + ".csv"
    json_path = path_base + ".json"
    lines = ["position,row_index"]
    lines += [f"{t},{int(ix)}" for t, ix in enumerate(result.indices)]
    atomic_write_text(csv_path, "\n".join(lines) + "\n")
    sidecar = dict(result.meta)
    sidecar["per_cell_counts"] = [int(c) for c in result.per_cell_counts]
    sidecar["skipped_iterations"] = result.skipped_iterations
    sidecar["size"] = result.size
    atomic_write_text(json_path, json.dumps(sidecar, indent=2) + "\n")
    return csv_path, json_path


def read_subsample_indices(csv_path: str) -> np.ndarray:
    with open(csv_path) as f:
        header = f.readline().strip()
        if header != "position,row_index":
            raise ValueError(f"{csv_path}: unexpected header {header!r}")
        return np.array([int(line.rsplit(",", 1)[1]) for line in f if line.strip()],
                        dtype=np.int64)
