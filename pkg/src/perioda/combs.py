"""Comb-shaped trees, their linear extensions and the urn they encode.

A comb ``(i_1, j_1; ...; i_n, j_n)`` is a leftmost branch made of ``n``
consecutive chains of ``i_k`` vertices. The last vertex of chain ``k`` also
carries ``j_k`` leaves. Labels increase away from the root.

Vertices are numbered with the branch first (root is 0), then the leaves in
segment order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial, prod

import numpy as np

from .posets import FinitePoset, poset_from_parents
from .tableaux import TableauShape
from .urn import ScheduleStep, UrnSchedule

BRUTE_FORCE_MAX_VERTICES = 12


@dataclass(frozen=True)
class CombTreeShape:
    segments: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        segs = tuple((int(i), int(j)) for i, j in self.segments)
        if not segs:
            raise ValueError("a comb needs at least one segment")
        for i, j in segs:
            if i < 1 or j < 0:
                raise ValueError(f"invalid segment ({i}, {j})")
        object.__setattr__(self, "segments", segs)

    @property
    def branch_length(self) -> int:
        return sum(i for i, _ in self.segments)

    @property
    def size(self) -> int:
        return sum(i + j for i, j in self.segments)

    @cached_property
    def parents(self) -> tuple[int | None, ...]:
        parents: list[int | None] = [None] + list(range(self.branch_length - 1))
        end = 0
        for i, j in self.segments:
            end += i
            parents.extend([end - 1] * j)
        return tuple(parents)

    def branch_vertex(self, q: int) -> int:
        """Vertex id of the ``q``-th branch vertex (1-indexed)."""
        if not 1 <= q <= self.branch_length:
            raise ValueError(f"branch position {q} out of range")
        return q - 1

    @property
    def last_branch_vertex(self) -> int:
        return self.branch_length - 1

    def subtree_sizes(self) -> list[int]:
        sizes = [1] * self.size
        for v in range(self.size - 1, 0, -1):
            par = self.parents[v]
            assert par is not None
            sizes[par] += sizes[v]
        return sizes

    def poset(self) -> FinitePoset:
        return poset_from_parents(self.parents)

    def drop_first_segment(self) -> "CombTreeShape":
        return CombTreeShape(self.segments[1:])


@dataclass(frozen=True)
class LinearExtension:
    tree: CombTreeShape
    labels: tuple[int, ...]

    def is_valid(self) -> bool:
        if sorted(self.labels) != list(range(1, self.tree.size + 1)):
            return False
        return all(par is None or self.labels[par] < self.labels[v]
                   for v, par in enumerate(self.tree.parents))


@dataclass(frozen=True)
class TreeReduction:
    """Tree of a tableau shape, with ``marked`` the branch position of ``v_m`` in ``tree``."""

    tree: CombTreeShape
    subtree: CombTreeShape
    marked: int


def tableau_to_tree(shape: TableauShape) -> TreeReduction:
    """Comb whose marked vertex carries one plus the corner entry, in law.

    For ``lambda_1^{i_1} ... lambda_n^{i_n}`` with ``m`` columns this is
    ``(1, N - m - lambda_1 + 1; i_1, lambda_1 - lambda_2; ...; i_n, lambda_n - 1)``
    with the mark on the last branch vertex.
    """
    blocks = shape.blocks()
    n_cells, m, lam1 = shape.size, shape.width, shape.height
    segs = [(1, n_cells - m - lam1 + 1)]
    for k, (lam, i) in enumerate(blocks):
        nxt = blocks[k + 1][0] if k + 1 < len(blocks) else 1
        segs.append((i, lam - nxt))
    tree = CombTreeShape(tuple(segs))
    return TreeReduction(tree=tree, subtree=tree.drop_first_segment(), marked=m + 1)


def tree_ext_count(tree: CombTreeShape) -> int:
    """Hook formula for trees: ``|T|! / prod of subtree sizes``."""
    return factorial(tree.size) // prod(tree.subtree_sizes())


def brute_force_linear_extensions(tree: CombTreeShape) -> list[LinearExtension]:
    if tree.size > BRUTE_FORCE_MAX_VERTICES:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_VERTICES} vertices")
    return [LinearExtension(tree, lab) for lab in tree.poset().extensions()]


def extension_label_law(tree: CombTreeShape, vertex: int) -> dict[int, Fraction]:
    """Exact law of a vertex label by exhaustive counting over order ideals."""
    return tree.poset().label_law(vertex)


def sample_linear_extension(tree: CombTreeShape, seed: int | np.random.Generator) -> LinearExtension:
    """Uniform linear extension.

    Labels ``|T|, |T|-1, ...`` go to leaves of the shrinking tree. A leaf
    ``u`` is chosen with probability ``ext(T - u) / ext(T)``, which by the
    hook formula is proportional to the product of ``h/(h-1)`` over the
    proper ancestors of ``u``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.Generator(np.random.PCG64(seed))
    parents = tree.parents
    sizes = tree.subtree_sizes()
    children = [0] * tree.size
    for par in parents:
        if par is not None:
            children[par] += 1
    alive = [True] * tree.size
    labels = [0] * tree.size
    for label in range(tree.size, 0, -1):
        leaves = [v for v in range(tree.size) if alive[v] and children[v] == 0]
        weights = []
        for u in leaves:
            w = 1.0
            a = parents[u]
            while a is not None:
                w *= sizes[a] / (sizes[a] - 1)
                a = parents[a]
            weights.append(w)
        probs = np.array(weights) / sum(weights)
        u = leaves[int(rng.choice(len(leaves), p=probs))]
        labels[u] = label
        alive[u] = False
        a = parents[u]
        if a is not None:
            children[a] -= 1
        while a is not None:
            sizes[a] -= 1
            a = parents[a]
    return LinearExtension(tree, tuple(labels))


def tree_to_urn(tree: CombTreeShape) -> UrnSchedule:
    """Urn schedule whose final black count is ``|S| - E_S(v) + 1`` in law.

    Here ``v`` is the last branch vertex of ``tree``. The urn starts at
    ``(j_n + 1, i_n)``; then for ``k = n-1, ..., 1`` it performs ``j_k``
    classical draws followed by adding ``i_k`` white balls. When ``j_k >= 1``
    the last draw and the addition merge into a single draw with matrix
    ``[[1, i_k], [0, 1 + i_k]]``.
    """
    segs = tree.segments
    i_n, j_n = segs[-1]
    steps: list[ScheduleStep] = []
    for i_k, j_k in reversed(segs[:-1]):
        if j_k >= 1:
            steps.extend([ScheduleStep(True, 0)] * (j_k - 1))
            steps.append(ScheduleStep(True, i_k))
        else:
            steps.append(ScheduleStep(False, i_k))
    return UrnSchedule(b0=j_n + 1, w0=i_n, steps=tuple(steps))


def young_polya_tree(ell: int, p: int, n: int) -> CombTreeShape:
    """Subtree ``S`` of the triangular shape ``(ell, p, n)``."""
    return tableau_to_tree(TableauShape.triangular(ell, p, n)).subtree


def enumerate_combs(max_size: int) -> list[CombTreeShape]:
    """All combs with at most ``max_size`` vertices."""
    out: list[CombTreeShape] = []

    def rec(prefix: list[tuple[int, int]], used: int) -> None:
        if prefix:
            out.append(CombTreeShape(tuple(prefix)))
        for i in range(1, max_size - used + 1):
            for j in range(0, max_size - used - i + 1):
                rec(prefix + [(i, j)], used + i + j)

    rec([], 0)
    return out


def law_shift(law: dict[int, Fraction], offset: int, reflect: int | None = None) -> dict[int, Fraction]:
    """Law of ``X + offset``, or of ``reflect - X + offset`` when ``reflect`` is given."""
    if reflect is None:
        return {k + offset: v for k, v in law.items()}
    return dict(sorted((reflect - k + offset, v) for k, v in law.items()))


def complement_law(tree: CombTreeShape, vertex: int | None = None) -> dict[int, Fraction]:
    """Exact law of ``|S| - E_S(v)`` for the last branch vertex (default) of ``tree``."""
    v = tree.last_branch_vertex if vertex is None else vertex
    return law_shift(extension_label_law(tree, v), 0, reflect=tree.size)
