import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from conftest import combs, shapes
from perioda.combs import CombTreeShape, extension_label_law, tableau_to_tree, tree_ext_count
from perioda.density import (
    CornerDensity, corner_density_polynomial, decompose_diagonals, diagonal_chain,
    entry_law_from_density, filament_constant, filament_constant_check, filament_extension,
    filament_identity_holds, in_order_polytope, law_to_csv, telescoping_check, telescoping_value,
    tree_corner_density,
)
from perioda.polynomial import SparsePolynomial, one_minus_x_power
from perioda.tableaux import TableauShape, corner_distribution_exact, count_syt, enumerate_shapes

SQUARE = TableauShape((2, 2))
HOOK = TableauShape((2, 1))
ROW2 = TableauShape((1, 1))
CORPUS = list(enumerate_shapes(10))
x = SparsePolynomial.variable(0, 1)


def test_polynomial_arithmetic():
    p = SparsePolynomial.univariate([1, 2, 3])
    assert (p - p).is_zero()
    assert (p * p)(2) == p(2) ** 2
    assert p.antiderivative(0).coefficients() == [0, 1, 1, 1]
    assert one_minus_x_power(3)(Fraction(1, 2)) == Fraction(1, 8)
    assert p.integral_01() == 3


def test_polynomial_integration_with_variable_bound():
    # int_0^{y} x dx = y^2 / 2 in arity 2
    xy = SparsePolynomial.variable(0, 2)
    out = xy.integrate(0, 0, ("var", 1)).project([1])
    assert out == SparsePolynomial.univariate([0, 0, Fraction(1, 2)])
    with pytest.raises(ValueError):
        xy.substitute_variable(0, 0)


def test_polynomial_json():
    p = SparsePolynomial(2, {(1, 2): Fraction(3, 7), (0, 0): Fraction(-1)})
    assert SparsePolynomial.from_json(p.to_json()) == p


def test_diagonals_of_square():
    dec = decompose_diagonals(SQUARE)
    assert dec.diagonals == (((1, 2),), ((1, 1), (2, 2)), ((2, 1),))
    assert dec.M == 3


def test_diagonals_of_row():
    dec = decompose_diagonals(TableauShape((1,) * 5))
    assert dec.M == 5 and all(len(d) == 1 for d in dec.diagonals)


def test_diagonals_of_hook():
    dec = decompose_diagonals(HOOK)
    assert dec.M == 3
    assert set(dec.cases) <= {1, 2, 3, 4}


@given(shapes(max_cells=14))
@settings(max_examples=60, deadline=None)
def test_diagonal_cover(shape):
    dec = decompose_diagonals(shape)
    cells = [c for d in dec.diagonals for c in d]
    assert sorted(cells) == sorted(shape.cells())
    assert dec.diagonals[-1] == (shape.corner,)


def test_row_density():
    assert corner_density_polynomial(ROW2).poly == x


def test_square_density():
    dens = corner_density_polynomial(SQUARE)
    assert dens.normalized() == (x * one_minus_x_power(1)).scale(6)


@pytest.mark.parametrize("shape", CORPUS, ids=lambda s: str(s.columns))
def test_volume_identity(shape):
    assert corner_density_polynomial(shape).ext == count_syt(shape)


def test_entry_law_examples():
    assert entry_law_from_density(CornerDensity(x.scale(2), 2)) == {2: 1}
    dens = CornerDensity((x * one_minus_x_power(1)).scale(6), 4)
    assert entry_law_from_density(dens) == {2: Fraction(1, 2), 3: Fraction(1, 2)}


def test_entry_law_rejects_high_degree():
    with pytest.raises(ValueError):
        entry_law_from_density(CornerDensity(SparsePolynomial.univariate([0, 0, 0, 1]), 2))


@pytest.mark.parametrize("shape", CORPUS, ids=lambda s: str(s.columns))
def test_round_trip(shape):
    assert entry_law_from_density(corner_density_polynomial(shape)) == corner_distribution_exact(shape)


def test_tree_density_path():
    dens = tree_corner_density(CombTreeShape(((2, 0),)))
    assert dens.ext == 1


def test_tree_density_small_comb():
    tree = CombTreeShape(((1, 0), (1, 1), (1, 0)))
    dens = tree_corner_density(tree)
    assert factorial(tree.size) * dens.poly.integral_01() == tree_ext_count(tree)


@given(combs(max_segments=4, max_i=3, max_j=3))
@settings(max_examples=60, deadline=None)
def test_tree_density_recovers_label_law(tree):
    dens = tree_corner_density(tree)
    assert dens.ext == tree_ext_count(tree)
    assert entry_law_from_density(dens) == extension_label_law(tree, tree.last_branch_vertex)


def test_filament_trivial_cases():
    dens = corner_density_polynomial(ROW2)
    assert filament_extension(dens, 0).poly == dens.poly
    ext1 = filament_extension(dens, 1)
    assert ext1.poly == x * one_minus_x_power(1)
    assert ext1.normalization == Fraction(1, 6)
    assert factorial(3) * ext1.normalization == 1
    with pytest.raises(ValueError):
        filament_extension(dens, -1)


@pytest.mark.parametrize("shape", CORPUS, ids=lambda s: str(s.columns))
def test_filament_identity(shape):
    assert all(filament_identity_holds(shape, L) for L in range(0, 5))


@pytest.mark.parametrize("cols,L", [((2, 2), 1), ((3, 3, 3), 2), ((2, 1), 1), ((3, 2), 3)])
def test_filament_constant_by_hooks(cols, L):
    # appending L cells to the bottom row: G_L is the ratio of the extension counts
    shape = TableauShape(cols)
    shape_l = TableauShape(cols + (1,) * L)
    if shape_l.columns != tuple(sorted(shape_l.columns, reverse=True)):
        pytest.skip("not a shape")
    lhs = Fraction(count_syt(shape), factorial(shape.size))
    rhs = filament_constant(shape, L) * Fraction(count_syt(shape_l), factorial(shape_l.size))
    assert lhs == rhs


@pytest.mark.parametrize("shape", CORPUS, ids=lambda s: str(s.columns))
def test_tree_and_tableau_densities_proportional(shape):
    chk = filament_constant_check(shape)
    assert chk.proportional
    sub = tableau_to_tree(shape).subtree
    assert chk.constant == Fraction(factorial(shape.size) * tree_ext_count(sub), factorial(sub.size) * count_syt(shape))


@pytest.mark.parametrize("shape", [HOOK, SQUARE, TableauShape((1, 1, 1))])
def test_proportionality_examples(shape):
    assert filament_constant_check(shape).proportional


def _random_point(shape, rng, inside):
    cells = shape.cells()
    if inside:
        # a random linear extension scaled into (0, 1) lies in the open polytope
        poset, order = shape.poset()
        exts = list(poset.extensions())
        lab = exts[rng.randrange(len(exts))]
        n = shape.size
        return {cell: Fraction(lab[k], n + 1) + Fraction(rng.randrange(1, 50), 1000 * (n + 1))
                for k, cell in enumerate(order)}
    return {cell: Fraction(rng.randrange(1, 1000), 1000) for cell in cells}


@pytest.mark.parametrize("cols", [(2, 2), (2, 1), (3, 2, 1), (3, 3, 1), (4, 2, 2), (2, 2, 2)])
def test_telescoping(cols):
    shape = TableauShape(cols)
    rng = random.Random(sum(cols))
    for inside in (True, False):
        for _ in range(20):
            pt = _random_point(shape, rng, inside)
            if inside:
                assert in_order_polytope(shape, pt)
            assert telescoping_check(shape, pt)


def test_telescoping_outside_is_zero():
    pt = {(1, 1): Fraction(1, 2), (2, 1): Fraction(1, 3), (1, 2): Fraction(3, 4), (2, 2): Fraction(4, 5)}
    assert not in_order_polytope(SQUARE, pt)
    assert telescoping_value(SQUARE, pt) == 0


@pytest.mark.parametrize("shape", CORPUS[::7], ids=lambda s: str(s.columns))
def test_density_nonnegative(shape):
    g = corner_density_polynomial(shape).poly
    assert all(g(Fraction(k, 100)) >= 0 for k in range(101))


def test_chain_reaches_univariate():
    chain = diagonal_chain(TableauShape((4, 3, 1)))
    assert chain[-1].arity == 1 and chain[0] == SparsePolynomial.constant(1, 1)


def test_chain_budget():
    with pytest.raises(ValueError):
        diagonal_chain(TableauShape((8, 8, 8, 8)))


def test_law_csv():
    text = law_to_csv({2: Fraction(1, 2), 3: Fraction(1, 2)})
    assert text == "k,prob_num,prob_den\n2,1,2\n3,1,2\n"
