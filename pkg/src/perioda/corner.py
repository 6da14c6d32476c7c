"""Corner and maximum statistics of large random tableaux.

The Monte Carlo part runs hook walks in a compiled kernel that stops as soon
as the south-east corner is removed: labels are handed out from ``N``
downwards, so the number of earlier removals is exactly ``N - Y``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numba
import numpy as np

from .combs import tableau_to_tree, tree_to_urn
from .limit_laws import GenGammaProdSpec
from .tableaux import TableauShape, hook_lengths

DEFAULT_BLOCK = 1000


@numba.njit(cache=True)
def _corner_gaps(heights0: np.ndarray, runs: int, seed: int) -> np.ndarray:
    np.random.seed(seed)
    m = heights0.shape[0]
    top = heights0[0]
    rows0 = np.zeros(top + 1, dtype=np.int64)
    for c in range(m):
        for r in range(1, heights0[c] + 1):
            rows0[r] += 1
    h = np.empty(m, dtype=np.int64)
    rows = np.empty(top + 1, dtype=np.int64)
    out = np.empty(runs, dtype=np.int64)
    for run in range(runs):
        h[:] = heights0
        rows[:] = rows0
        removed = 0
        while True:
            # uniform remaining cell by rejection in the bounding box
            while True:
                c = np.random.randint(0, m)
                r = np.random.randint(1, h[0] + 1)
                if r <= h[c]:
                    break
            while True:
                arm = rows[r] - (c + 1)
                leg = h[c] - r
                k = arm + leg
                if k == 0:
                    break
                j = np.random.randint(1, k + 1)
                if j <= arm:
                    c += j
                else:
                    r += j - arm
            if c == m - 1 and r == 1:
                break
            h[c] -= 1
            rows[r] -= 1
            removed += 1
        out[run] = removed
    return out


def corner_gaps(shape: TableauShape, runs: int, seed: int, block: int = DEFAULT_BLOCK) -> np.ndarray:
    """Samples of ``N - Y`` where ``Y`` is the corner entry of a uniform filling.

    Block ``j`` of ``block`` runs is seeded with ``seed ^ j``.
    """
    heights = np.array(shape.columns, dtype=np.int64)
    out = np.empty(runs, dtype=np.int64)
    for j, start in enumerate(range(0, runs, block)):
        size = min(block, runs - start)
        out[start:start + size] = _corner_gaps(heights, size, (seed ^ j) & 0xFFFFFFFF)
    return out


@dataclass(frozen=True)
class CornerExperiment:
    shape: TableauShape
    n: int
    delta: float
    scale: float
    gaps: np.ndarray
    limit: GenGammaProdSpec

    @property
    def corner_entries(self) -> np.ndarray:
        return self.shape.size - self.gaps

    @property
    def rescaled(self) -> np.ndarray:
        return self.scale * self.gaps / self.n ** (1 + self.delta)

    def mean_and_stderr(self) -> tuple[float, float]:
        x = self.rescaled
        return float(x.mean()), float(x.std(ddof=1) / math.sqrt(len(x)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["run", "corner_entry", "rescaled"])
        for k, (y, z) in enumerate(zip(self.corner_entries, self.rescaled)):
            w.writerow([k, int(y), f"{z:.15g}"])
        return buf.getvalue()


def pattern_shape(ells: tuple[int, ...], n: int, b0: int | None, w0: int | None) -> TableauShape:
    shape = TableauShape.periodic_pattern(ells, n)
    if b0 is not None and w0 is not None:
        shape = shape.shifted_by_block(b0, w0)
    return shape


def corner_statistic_experiment(
    ells: tuple[int, ...], n: int, runs: int, seed: int,
    b0: int | None = None, w0: int | None = None,
) -> CornerExperiment:
    """Hook-walk samples of ``(2/(p l)) (N - Y_n) / n^(1+delta)``.

    With ``b0, w0`` unset the shape is the periodic pattern itself; the
    triangular shape ``(l, p, n)`` is the pattern ``(0, ..., 0, l)``, whose
    limit law is ``GenGammaProd(pattern; p, l)``. With a block the limit is
    ``GenGammaProd(pattern; b0, w0)``.
    """
    p, ell = len(ells), sum(ells)
    if ell == 0:
        raise ValueError("pattern needs a positive entry")
    shape = pattern_shape(ells, n, b0, w0)
    if b0 is None or w0 is None:
        if not all(x == 0 for x in ells[:-1]):
            raise ValueError("unshifted experiments are defined for triangular patterns only")
        limit = GenGammaProdSpec(ells, p, ell)
    else:
        limit = GenGammaProdSpec(ells, b0, w0)
    gaps = corner_gaps(shape, runs, seed)
    return CornerExperiment(shape=shape, n=n, delta=p / (p + ell), scale=2 / (p * ell),
                            gaps=gaps, limit=limit)


def order_statistic_moments(N: int, s: int, a: int) -> tuple[Fraction, Fraction]:
    """Moments of the number ``I`` of free elements above the ``a``-th largest of a group.

    ``N - 1`` ranks hold a group of ``s`` elements placed uniformly and
    ``N - s - 1`` free elements.
    """
    if not (1 <= a <= s and N >= s + 1):
        raise ValueError(f"need 1 <= a <= s and N >= s + 1, got N={N}, s={s}, a={a}")
    e1 = Fraction((N - s - 1) * a, s + 1)
    e2 = Fraction(a * (N - s - 1) * ((a + 1) * N - (s + 2) * a), (s + 1) * (s + 2))
    return e1, e2


def order_statistic_bruteforce(N: int, s: int, a: int) -> tuple[Fraction, Fraction]:
    """Same moments by averaging over all placements of the group."""
    from itertools import combinations

    total = comb(N - 1, s)
    m1 = m2 = 0
    for pos in combinations(range(N - 1), s):
        threshold = pos[s - a]
        free_above = (N - 2 - threshold) - (a - 1)
        m1 += free_above
        m2 += free_above**2
    return Fraction(m1, total), Fraction(m2, total)


def exact_corner_gap_moments(shape: TableauShape) -> tuple[Fraction, Fraction]:
    """Exact ``E[N-Y]`` and ``E[(N-Y)^2]`` through the tree and urn reductions.

    ``N - Y`` has the law of ``a + I`` where ``a + 1`` is the final black count
    of the urn of the reduced tree and ``I`` counts free leaves above the marked
    vertex, whose conditional moments are the order-statistic formulas.
    """
    red = tableau_to_tree(shape)
    s = red.subtree.size
    total = red.tree.size
    m1 = m2 = Fraction(0)
    for black, prob in tree_to_urn(red.subtree).distribution().items():
        a = black - 1
        if total > s + 1:
            e1, e2 = order_statistic_moments(total, s, black)
        else:
            e1 = e2 = Fraction(0)
        m1 += prob * (a + e1)
        m2 += prob * (a * a + 2 * a * e1 + e2)
    return m1, m2


# --------------------------------------------------------------------------
# Location of the maximum


def _corner_columns(ell: int, n: int) -> list[int]:
    return [k * ell for k in range(1, n + 1)]


def argmax_position_distribution(ell: int, p: int, n: int) -> dict[int, Fraction]:
    """Exact law of the column holding the largest entry of the triangular shape.

    ``P(max at corner c) = f(Y - c) / f(Y) = (1/N) * prod h/(h-1)`` over the
    cells sharing a row or a column with ``c``.
    """
    shape = TableauShape.triangular(ell, p, n)
    hooks = hook_lengths(shape)
    N = shape.size
    law = {}
    for col in _corner_columns(ell, n):
        row = shape.columns[col - 1]
        ratio = Fraction(1, N)
        for c in range(1, col):
            h = hooks[(c, row)]
            ratio *= Fraction(h, h - 1)
        for r in range(1, row):
            h = hooks[(col, r)]
            ratio *= Fraction(h, h - 1)
        law[col] = ratio
    return law


def argmax_position_probabilities(ell: int, p: int, n: int) -> np.ndarray:
    """Floating-point version of the argmax law for large ``n``, indexed by ``k = 1..n``."""
    heights = np.repeat(np.arange(n, 0, -1) * p, ell)
    N = int(heights.sum())
    max_h = int(heights[0])
    # rows[r-1] = number of columns of height >= r
    rows = np.searchsorted(-heights, -np.arange(1, max_h + 1), side="right")
    logs = np.empty(n)
    for k, col in enumerate(_corner_columns(ell, n)):
        row = int(heights[col - 1])
        cs = np.arange(1, col)
        h_row = (rows[row - 1] - cs) + (heights[cs - 1] - row) + 1
        rs = np.arange(1, row)
        h_col = (rows[rs - 1] - col) + (heights[col - 1] - rs) + 1
        h = np.concatenate([h_row, h_col]).astype(float)
        logs[k] = np.sum(np.log(h) - np.log(h - 1)) - math.log(N)
    return np.exp(logs)


def arcsine_density(x: np.ndarray | float, delta: float) -> np.ndarray | float:
    return x ** (delta - 1) * (1 - x) ** (-delta) / (math.gamma(delta) * math.gamma(1 - delta))


def arcsine_l1_distance(ell: int, p: int, n: int, lo: float = 0.05, hi: float = 0.95) -> float:
    """L1 gap on ``[lo, hi]`` between ``n P(Posi = k ell)`` at ``x = k/n`` and the arcsine density."""
    probs = argmax_position_probabilities(ell, p, n)
    delta = p / (p + ell)
    k = np.arange(1, n + 1)
    x = k / n
    mask = (x >= lo) & (x <= hi)
    return float(np.sum(np.abs(n * probs[mask] - arcsine_density(x[mask], delta))) / n)
