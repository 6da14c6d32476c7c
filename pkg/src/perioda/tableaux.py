"""Young tableau shapes in French convention, hook lengths and exact laws.

Cells are ``(c, r)`` with column ``c`` counted from the left and row ``r``
from the bottom, both from 1. A shape is the tuple of its column heights,
weakly decreasing. Entries increase to the right and upwards. The
south-east corner is the bottom cell of the last column.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, prod
from typing import Iterator, Sequence

import numpy as np

from .posets import FinitePoset

Cell = tuple[int, int]
BRUTE_FORCE_MAX_CELLS = 16


@dataclass(frozen=True)
class TableauShape:
    columns: tuple[int, ...]

    def __post_init__(self) -> None:
        cols = tuple(int(h) for h in self.columns)
        if not cols or any(h <= 0 for h in cols):
            raise ValueError(f"column heights must be positive, got {cols}")
        if any(a < b for a, b in zip(cols, cols[1:])):
            raise ValueError(f"column heights must weakly decrease, got {cols}")
        object.__setattr__(self, "columns", cols)

    # constructors --------------------------------------------------------

    @classmethod
    def from_blocks(cls, blocks: Sequence[tuple[int, int]]) -> "TableauShape":
        """Shape ``lambda_1^{i_1} ... lambda_n^{i_n}`` from ``(lambda_k, i_k)`` pairs."""
        cols: list[int] = []
        for height, mult in blocks:
            cols.extend([height] * mult)
        return cls(tuple(cols))

    @classmethod
    def triangular(cls, ell: int, p: int, n: int) -> "TableauShape":
        """``ell`` columns of height ``k p`` for each ``k = n, ..., 1``."""
        return cls.from_blocks([(k * p, ell) for k in range(n, 0, -1)])

    @classmethod
    def periodic_pattern(cls, ells: Sequence[int], n: int) -> "TableauShape":
        p = len(ells)
        blocks = []
        for k in range(n, 0, -1):
            for j in range(p, 0, -1):
                blocks.append((k * p - (p - j), ells[j - 1]))
        return cls.from_blocks(blocks)

    def shifted_by_block(self, b0: int, w0: int) -> "TableauShape":
        return TableauShape(tuple(h + b0 for h in self.columns) + (b0,) * w0)

    @classmethod
    def from_json(cls, text: str) -> "TableauShape":
        data = json.loads(text)
        if "columns" in data:
            return cls(tuple(data["columns"]))
        if "pattern" in data:
            pat = data["pattern"]
            shape = cls.periodic_pattern(pat["ells"], int(pat["n"]))
            shift = pat.get("shift")
            if shift:
                shape = shape.shifted_by_block(int(shift["b0"]), int(shift["w0"]))
            return shape
        if "triangular" in data:
            t = data["triangular"]
            return cls.triangular(int(t["ell"]), int(t["p"]), int(t["n"]))
        raise ValueError("shape JSON needs 'columns' or 'pattern'")

    def to_json(self) -> str:
        return json.dumps({"columns": list(self.columns)})

    # geometry ------------------------------------------------------------

    @property
    def size(self) -> int:
        return sum(self.columns)

    @property
    def width(self) -> int:
        return len(self.columns)

    @property
    def height(self) -> int:
        return self.columns[0]

    def row_lengths(self) -> tuple[int, ...]:
        return tuple(sum(1 for h in self.columns if h >= r) for r in range(1, self.height + 1))

    def blocks(self) -> list[tuple[int, int]]:
        """``(lambda_k, i_k)`` pairs with distinct heights, tallest first."""
        counts = Counter(self.columns)
        return [(h, counts[h]) for h in sorted(counts, reverse=True)]

    def cells(self) -> list[Cell]:
        return [(c, r) for c, h in enumerate(self.columns, start=1) for r in range(1, h + 1)]

    @property
    def corner(self) -> Cell:
        return (self.width, 1)

    def is_rectangle(self) -> bool:
        return len(set(self.columns)) == 1

    def removable_corners(self) -> list[Cell]:
        cols = self.columns
        return [(c, cols[c - 1]) for c in range(1, self.width + 1)
                if c == self.width or cols[c] < cols[c - 1]]

    def remove(self, cell: Cell) -> "TableauShape | None":
        c, r = cell
        if cell not in self.removable_corners():
            raise ValueError(f"{cell} is not a removable corner")
        cols = list(self.columns)
        cols[c - 1] -= 1
        cols = [h for h in cols if h > 0]
        return TableauShape(tuple(cols)) if cols else None

    def poset(self) -> tuple[FinitePoset, list[Cell]]:
        cells = self.cells()
        index = {cell: k for k, cell in enumerate(cells)}
        preds = []
        for c, r in cells:
            ps = []
            if c > 1:
                ps.append(index[(c - 1, r)])
            if r > 1:
                ps.append(index[(c, r - 1)])
            preds.append(tuple(ps))
        return FinitePoset(tuple(preds)), cells


def hook_lengths(shape: TableauShape) -> dict[Cell, int]:
    rows = shape.row_lengths()
    return {(c, r): (rows[r - 1] - c) + (shape.columns[c - 1] - r) + 1
            for c, r in shape.cells()}


def count_syt(shape: TableauShape) -> int:
    return factorial(shape.size) // prod(hook_lengths(shape).values())


@dataclass(frozen=True)
class StandardFilling:
    """Rows listed bottom to top, each left to right."""

    shape: TableauShape
    rows: tuple[tuple[int, ...], ...]

    def entry(self, cell: Cell) -> int:
        c, r = cell
        return self.rows[r - 1][c - 1]

    def is_standard(self) -> bool:
        n = self.shape.size
        flat = sorted(x for row in self.rows for x in row)
        if flat != list(range(1, n + 1)):
            return False
        for c, r in self.shape.cells():
            x = self.entry((c, r))
            if c > 1 and self.entry((c - 1, r)) >= x:
                return False
            if r > 1 and self.entry((c, r - 1)) >= x:
                return False
        return True

    def as_lists(self) -> list[list[int]]:
        return [list(row) for row in self.rows]


def _filling_from_labels(shape: TableauShape, cells: list[Cell], labels: Sequence[int]) -> StandardFilling:
    rows = [[0] * n for n in shape.row_lengths()]
    for (c, r), x in zip(cells, labels):
        rows[r - 1][c - 1] = x
    return StandardFilling(shape, tuple(tuple(row) for row in rows))


def brute_force_syt(shape: TableauShape) -> list[StandardFilling]:
    """All standard fillings by backtracking (``N <= 16``)."""
    if shape.size > BRUTE_FORCE_MAX_CELLS:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_CELLS} cells")
    poset, cells = shape.poset()
    return [_filling_from_labels(shape, cells, lab) for lab in poset.extensions()]


def _rng(seed: int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def hook_walk_sample(shape: TableauShape, seed: int | np.random.Generator) -> StandardFilling:
    """Uniform standard filling by repeated hook walks.

    Each round starts at a uniform remaining cell, jumps to a uniform cell of
    its hook until it reaches a corner, and gives that corner the largest
    label not yet used.
    """
    rng = _rng(seed)
    heights = list(shape.columns)
    rows = list(shape.row_lengths())
    labels: dict[Cell, int] = {}
    for label in range(shape.size, 0, -1):
        while True:
            c = int(rng.integers(1, len(heights) + 1))
            r = int(rng.integers(1, heights[0] + 1))
            if r <= heights[c - 1]:
                break
        while True:
            arm = rows[r - 1] - c
            leg = heights[c - 1] - r
            if arm + leg == 0:
                break
            j = int(rng.integers(1, arm + leg + 1))
            if j <= arm:
                c += j
            else:
                r += j - arm
        labels[(c, r)] = label
        heights[c - 1] -= 1
        rows[r - 1] -= 1
        while heights and heights[-1] == 0:
            heights.pop()
        while rows and rows[-1] == 0:
            rows.pop()
    cells = shape.cells()
    return _filling_from_labels(shape, cells, [labels[cell] for cell in cells])


def corner_distribution_exact(shape: TableauShape) -> dict[int, Fraction]:
    """Exact law of the south-east corner entry.

    Rectangles use the closed form; other shapes with at most 16 cells are
    counted exhaustively over the lattice of sub-shapes.
    """
    if shape.is_rectangle():
        lam, i = shape.height, shape.width
        den = comb(lam * i, lam + i - 1)
        law = {k: Fraction(comb(k - 1, i - 1) * comb(lam * i - k, lam - 1), den)
               for k in range(1, lam * i + 1)}
        return {k: v for k, v in law.items() if v}
    if shape.size > BRUTE_FORCE_MAX_CELLS:
        raise ValueError("non-rectangular shape too large for exact enumeration")
    poset, cells = shape.poset()
    return poset.label_law(cells.index(shape.corner))


def law_from_fillings(fillings: Sequence[StandardFilling], cell: Cell) -> dict[int, Fraction]:
    counts = Counter(f.entry(cell) for f in fillings)
    total = sum(counts.values())
    return {k: Fraction(v, total) for k, v in sorted(counts.items())}


def enumerate_shapes(max_cells: int) -> Iterator[TableauShape]:
    """All shapes (partitions) with ``1..max_cells`` cells."""
    def parts(n: int, cap: int) -> Iterator[tuple[int, ...]]:
        if n == 0:
            yield ()
            return
        for h in range(min(n, cap), 0, -1):
            for rest in parts(n - h, h):
                yield (h,) + rest

    for n in range(1, max_cells + 1):
        for cols in parts(n, n):
            yield TableauShape(cols)
