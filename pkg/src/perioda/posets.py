"""Exhaustive linear-extension counting on small posets.

Elements are ``0..n-1``; ``preds[v]`` lists the elements covered by ``v``.
Counting walks the lattice of order ideals (down-sets), encoded as bitmasks.
This is independent of any hook formula and is used as the reference oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

MAX_ELEMENTS = 24


@dataclass(frozen=True)
class FinitePoset:
    preds: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.preds)

    @cached_property
    def _pred_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << u for u in ps) for ps in self.preds)

    def _addable(self, ideal: int) -> Iterator[int]:
        for v, pm in enumerate(self._pred_masks):
            if not ideal >> v & 1 and pm & ideal == pm:
                yield v

    @cached_property
    def _forward(self) -> dict[int, int]:
        """Number of linear extensions of every order ideal."""
        if self.size > MAX_ELEMENTS:
            raise ValueError(f"poset too large for exhaustive counting ({self.size})")
        counts = {0: 1}
        layer = {0}
        for _ in range(self.size):
            nxt: set[int] = set()
            for ideal in layer:
                c = counts[ideal]
                for v in self._addable(ideal):
                    up = ideal | 1 << v
                    counts[up] = counts.get(up, 0) + c
                    nxt.add(up)
            layer = nxt
        return counts

    @cached_property
    def _backward(self) -> dict[int, int]:
        """Number of ways to complete every order ideal to the whole poset."""
        full = (1 << self.size) - 1
        back = {full: 1}
        for ideal in sorted(self._forward, key=lambda m: -bin(m).count("1")):
            if ideal == full:
                continue
            back[ideal] = sum(back[ideal | 1 << v] for v in self._addable(ideal))
        return back

    def count_extensions(self) -> int:
        return self._forward[(1 << self.size) - 1]

    def label_law(self, v: int) -> dict[int, Fraction]:
        """Law of the label of ``v`` under a uniform linear extension (labels from 1)."""
        fwd, back = self._forward, self._backward
        total = self.count_extensions()
        counts: dict[int, int] = {}
        pm = self._pred_masks[v]
        for ideal, c in fwd.items():
            if ideal >> v & 1 or pm & ideal != pm:
                continue
            k = bin(ideal).count("1") + 1
            counts[k] = counts.get(k, 0) + c * back[ideal | 1 << v]
        return {k: Fraction(c, total) for k, c in sorted(counts.items())}

    def extensions(self) -> Iterator[tuple[int, ...]]:
        """Every linear extension, as the label of each element (labels from 1)."""
        labels = [0] * self.size

        def rec(ideal: int, nxt: int) -> Iterator[tuple[int, ...]]:
            if nxt > self.size:
                yield tuple(labels)
                return
            for v in self._addable(ideal):
                labels[v] = nxt
                yield from rec(ideal | 1 << v, nxt + 1)

        yield from rec(0, 1)


def poset_from_parents(parents: Sequence[int | None]) -> FinitePoset:
    return FinitePoset(tuple(() if p is None else (p,) for p in parents))
