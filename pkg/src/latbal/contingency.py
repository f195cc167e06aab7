"""Contingency tables over label combinations.

The table is dense over all 2^m cells, indexed with attribute 0 as the
least significant bit (see core.encode_bits).  Cell membership keeps the
dataset row order, so table construction is deterministic.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import LatentDataset, decode_index


@dataclass
class ContingencyTable:
    m: int
    counts: np.ndarray            # 2^m cell counts
    members: list[np.ndarray]     # row indices per cell, dataset order

    @property
    def n_cells(self) -> int:
        return 1 << self.m

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass
class ImbalanceStats:
    min_cell: int
    max_cell: int
    nonempty_cells: int
    max_min_ratio: Optional[float]   # max/min over non-empty cells; None if table empty
    chi_square_vs_uniform: float     # expected count N/2^m for every cell


def cell_indices(dataset: LatentDataset) -> np.ndarray:
    """Cell index per dataset row."""
    weights = (1 << np.arange(dataset.m, dtype=np.int64))
    return dataset.labels.astype(np.int64) @ weights


def build_contingency(dataset: LatentDataset) -> ContingencyTable:
    m = dataset.m
    n_cells = 1 << m
    cells = cell_indices(dataset)
    counts = np.bincount(cells, minlength=n_cells).astype(np.int64)
    # stable sort groups rows by cell while preserving row order within cells
    order = np.argsort(cells, kind="stable")
    bounds = np.cumsum(counts)
    members = np.split(order, bounds[:-1])
    return ContingencyTable(m=m, counts=counts, members=[np.asarray(g) for g in members])


def imbalance_stats(table: ContingencyTable) -> ImbalanceStats:
    counts = table.counts
    total = int(counts.sum())
    nonempty = counts[counts > 0]
    if total == 0:
        return ImbalanceStats(0, 0, 0, None, 0.0)
    expected = total / table.n_cells
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    return ImbalanceStats(
        min_cell=int(counts.min()),
        max_cell=int(counts.max()),
        nonempty_cells=int(nonempty.size),
        max_min_ratio=float(nonempty.max() / nonempty.min()),
        chi_square_vs_uniform=chi2,
    )


def bits_string(index: int, m: int) -> str:
    """Render a cell index as a 0/1 string, attribute 0 first."""
    return "".join(str(b) for b in decode_index(index, m))


def write_contingency_csv(table: ContingencyTable, path: str) -> None:
    from .dataio import atomic_write_text

    lines = ["cell_index,bits,count"]
    for c in range(table.n_cells):
        lines.append(f"{c},{bits_string(c, table.m)},{int(table.counts[c])}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_contingency_csv(path: str) -> tuple[np.ndarray, int]:
    """Counts array and m from an exported table."""
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        raise ValueError(f"{path}: empty contingency CSV")
    m = len(rows[0]["bits"])
    counts = np.zeros(1 << m, dtype=np.int64)
    for row in rows:
        counts[int(row["cell_index"])] = int(row["count"])
    return counts, m
