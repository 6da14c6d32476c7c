"""Exact density chains over the order polytope of a tableau or a comb.

A uniform point of the order polytope of a shape is built diagonal by
diagonal. ``g_k`` is the joint marginal (up to the volume) of the variables on
diagonal ``D_k`` once ``D_1, ..., D_{k-1}`` are integrated out. The last
diagonal is the south-east corner, so ``g_M`` is a univariate polynomial
whose normalisation is the law of the corner coordinate.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .combs import CombTreeShape, tableau_to_tree, tree_ext_count
from .polynomial import SparsePolynomial, one_minus_x_power
from .tableaux import Cell, TableauShape, count_syt

MAX_DIAGONAL = 8
MAX_CELLS = 30

# column-range moves between consecutive diagonals: (left shift, right shift)
CASE_TAGS = {(1, 1): 1, (0, 0): 2, (1, 0): 3, (0, 1): 4}


@dataclass(frozen=True)
class DiagonalDecomposition:
    shape: TableauShape
    diagonals: tuple[tuple[Cell, ...], ...]
    cases: tuple[int, ...]

    @property
    def M(self) -> int:
        return len(self.diagonals)


def decompose_diagonals(shape: TableauShape) -> DiagonalDecomposition:
    """Slice the shape into diagonals of constant ``c - r``, north-west first."""
    lam1 = shape.height
    M = shape.width + lam1 - 1
    diags: list[list[Cell]] = [[] for _ in range(M)]
    for c, r in shape.cells():
        diags[c - r + lam1 - 1].append((c, r))
    diagonals = tuple(tuple(sorted(d)) for d in diags)
    cases = []
    for a, b in zip(diagonals, diagonals[1:]):
        moves = (b[0][0] - a[0][0], b[-1][0] - a[-1][0])
        if moves not in CASE_TAGS:
            raise AssertionError(f"unexpected diagonal interlock {moves}")
        tag = CASE_TAGS[moves]
        expected = len(a) + {1: 0, 2: 0, 3: -1, 4: 1}[tag]
        assert len(b) == expected, "variable count disagrees with the case tag"
        cases.append(tag)
    return DiagonalDecomposition(shape, diagonals, tuple(cases))


@dataclass(frozen=True)
class CornerDensity:
    """Unnormalised univariate density ``poly`` of a coordinate in an ``N``-point polytope."""

    poly: SparsePolynomial
    N: int

    @property
    def normalization(self) -> Fraction:
        return self.poly.integral_01()

    @property
    def ext(self) -> Fraction:
        return factorial(self.N) * self.normalization

    def normalized(self) -> SparsePolynomial:
        return self.poly.scale(1 / self.normalization)


def _step(g: SparsePolynomial, cur: tuple[Cell, ...], nxt: tuple[Cell, ...],
          shape: TableauShape) -> SparsePolynomial:
    a, b = len(cur), len(nxt)
    pos_next = {cell: a + k for k, cell in enumerate(nxt)}
    poly = g.lift(a + b, range(a))
    for k, (c, r) in enumerate(cur):
        below = (c, r - 1)
        right = (c + 1, r)
        lower = ("var", pos_next[below]) if below in pos_next else 0
        upper = ("var", pos_next[right]) if right in pos_next else 1
        poly = poly.integrate(k, lower, upper)
    return poly.project(range(a, a + b))


def diagonal_chain(shape: TableauShape) -> list[SparsePolynomial]:
    """All ``g_1, ..., g_M``."""
    if shape.size > MAX_CELLS:
        raise ValueError(f"density chain limited to {MAX_CELLS} cells")
    dec = decompose_diagonals(shape)
    if max(len(d) for d in dec.diagonals) > MAX_DIAGONAL:
        raise ValueError(f"density chain limited to diagonals of size {MAX_DIAGONAL}")
    g = SparsePolynomial.constant(1, 1)
    chain = [g]
    for cur, nxt in zip(dec.diagonals, dec.diagonals[1:]):
        g = _step(g, cur, nxt, shape)
        chain.append(g)
    return chain


def corner_density_polynomial(shape: TableauShape) -> CornerDensity:
    return CornerDensity(poly=diagonal_chain(shape)[-1], N=shape.size)


def entry_law_from_density(density: CornerDensity) -> dict[int, Fraction]:
    """Discrete law of the rank ``k`` whose Beta(k, N-k+1) mixture is the density.

    With ``g / int g = sum_i a_i x^i`` the Bernstein coefficients of degree
    ``N - 1`` are ``beta_k = sum_{i<=k} C(k,i)/C(N-1,i) a_i`` and
    ``P(k + 1) = beta_k / N``.

    Raises:
        ValueError: if the degree exceeds ``N - 1`` or the result is not a law.
    """
    g = density.normalized()
    N = density.N
    coeffs = g.coefficients()
    if len(coeffs) > N:
        raise ValueError("density degree exceeds N - 1")
    coeffs += [Fraction(0)] * (N - len(coeffs))
    law = {}
    for k in range(N):
        beta = sum((Fraction(comb(k, i), comb(N - 1, i)) * coeffs[i] for i in range(k + 1)),
                   Fraction(0))
        if beta:
            law[k + 1] = beta / N
    if any(v < 0 for v in law.values()) or sum(law.values()) != 1:
        raise ValueError("density does not encode a probability law")
    return law


def tree_corner_density(tree: CombTreeShape) -> CornerDensity:
    """Density of the last branch vertex in the order polytope of a comb.

    Its leaves integrate to ``(1 - x)`` factors, so along the branch
    ``A_q(t) = int_0^t A_{q-1}(s) (1 - s)^{sigma_q} ds`` and the density is
    ``A_{m-1}(x) (1 - x)^{sigma_m}``, where ``sigma_q`` counts the leaves on
    branch vertex ``q``.
    """
    m = tree.branch_length
    sigma = [0] * m
    end = 0
    for i, j in tree.segments:
        end += i
        sigma[end - 1] = j
    if tree.size > 4 * MAX_CELLS:
        raise ValueError("tree too large for the exact density chain")
    acc = SparsePolynomial.constant(1, 1)
    for q in range(m - 1):
        # antiderivatives of monomials vanish at 0, so this is the integral from 0
        acc = (acc * one_minus_x_power(sigma[q])).antiderivative(0)
    return CornerDensity(poly=acc * one_minus_x_power(sigma[m - 1]), N=tree.size)


def filament_extension(density: CornerDensity, L: int) -> CornerDensity:
    """Density of the same coordinate after a chain of ``L`` larger cells is attached."""
    if L < 0:
        raise ValueError("L must be non-negative")
    poly = (density.poly * one_minus_x_power(L)).scale(Fraction(1, factorial(L)))
    return CornerDensity(poly=poly, N=density.N + L)


def _falling(a: int, b: int) -> int:
    out = 1
    for t in range(b):
        out *= a - t
    return out


def filament_constant(shape: TableauShape, L: int) -> Fraction:
    """``G_L = L! prod_k (J_k + L + lambda_k - 1)_{i_k} / (J_k + lambda_k - 1)_{i_k}``.

    ``J_k = i_k + ... + i_n`` counts the columns from block ``k`` to the right
    edge. Appending ``L`` cells to the bottom row raises each bottom-row hook
    by ``L``, and in block ``k`` these hooks run through
    ``J_k + lambda_k - 1`` down to ``J_k - i_k + lambda_k``.
    """
    out = Fraction(factorial(L))
    remaining = shape.width
    for lam, i in shape.blocks():
        out *= Fraction(_falling(remaining + L + lam - 1, i), _falling(remaining + lam - 1, i))
        remaining -= i
    return out


def filament_identity_holds(shape: TableauShape, L: int) -> bool:
    """``int g_M (1-y)^L dy = (L!/G_L) ext(Y)/N!`` as exact rationals."""
    dens = corner_density_polynomial(shape)
    lhs = (dens.poly * one_minus_x_power(L)).integral_01()
    rhs = Fraction(factorial(L)) / filament_constant(shape, L) * Fraction(count_syt(shape), factorial(shape.size))
    return lhs == rhs


@dataclass(frozen=True)
class FilamentCheck:
    constant: Fraction
    proportional: bool
    tableau_density: SparsePolynomial
    tree_density: SparsePolynomial


def filament_constant_check(shape: TableauShape) -> FilamentCheck:
    """Check ``h = c g_M`` with ``c = |Y|!/|S|! * ext(S)/ext(Y)``.

    Raises:
        AssertionError: if the two polynomials are not proportional with that constant.
    """
    g = corner_density_polynomial(shape).poly
    sub = tableau_to_tree(shape).subtree
    h = tree_corner_density(sub).poly
    c = Fraction(factorial(shape.size), factorial(sub.size)) * Fraction(tree_ext_count(sub), count_syt(shape))
    ok = h == g.scale(c)
    if not ok:
        raise AssertionError(f"tree and tableau densities are not proportional for {shape.columns}")
    return FilamentCheck(constant=c, proportional=ok, tableau_density=g, tree_density=h)


def _in_box(cell: Cell, point: dict[Cell, Fraction]) -> bool:
    c, r = cell
    lower = point.get((c, r - 1), Fraction(0))
    upper = point.get((c + 1, r), Fraction(1))
    return lower < point[cell] < upper


def in_order_polytope(shape: TableauShape, point: dict[Cell, Fraction]) -> bool:
    for c, r in shape.cells():
        x = point[(c, r)]
        if not 0 < x < 1:
            return False
        if c > 1 and not point[(c - 1, r)] < x:
            return False
        if r > 1 and not point[(c, r - 1)] < x:
            return False
    return True


def telescoping_value(shape: TableauShape, point: dict[Cell, Fraction]) -> Fraction:
    """Joint density of the diagonal-by-diagonal construction at ``point``.

    The corner is drawn from ``g_M / int g_M``; then each ``D_k`` given
    ``D_{k+1}`` from ``g_k / g_{k+1}`` on the box cut out by ``D_{k+1}``.
    The product should equal ``1 / vol`` on the polytope and 0 elsewhere.
    """
    dec = decompose_diagonals(shape)
    chain = diagonal_chain(shape)
    corner = dec.diagonals[-1][0]
    if not 0 < point[corner] < 1:
        return Fraction(0)
    for k in range(dec.M - 1):
        if not all(_in_box(cell, point) for cell in dec.diagonals[k]):
            return Fraction(0)
    value = chain[-1](point[corner]) / chain[-1].integral_01()
    for k in range(dec.M - 1):
        cur = [point[cell] for cell in dec.diagonals[k]]
        nxt = [point[cell] for cell in dec.diagonals[k + 1]]
        value *= chain[k](*cur) / chain[k + 1](*nxt)
    return value


def telescoping_check(shape: TableauShape, point: dict[Cell, Fraction]) -> bool:
    vol = corner_density_polynomial(shape).normalization
    expected = 1 / vol if in_order_polytope(shape, point) else Fraction(0)
    return telescoping_value(shape, point) == expected


def law_to_csv(law: dict[int, Fraction]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "prob_num", "prob_den"])
    for k, v in sorted(law.items()):
        w.writerow([k, v.numerator, v.denominator])
    return buf.getvalue()
