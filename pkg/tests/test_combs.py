from collections import Counter
from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chisquare

from conftest import combs, shapes
from perioda.combs import (
    CombTreeShape, LinearExtension, brute_force_linear_extensions, complement_law, enumerate_combs,
    extension_label_law, law_shift, sample_linear_extension, tableau_to_tree, tree_ext_count,
    tree_to_urn, young_polya_tree,
)
from perioda.posets import FinitePoset, poset_from_parents
from perioda.tableaux import TableauShape, corner_distribution_exact
from perioda.urn import UrnSpec

SMALL = CombTreeShape(((1, 0), (1, 1), (1, 0)))


def test_comb_structure():
    assert SMALL.size == 4 and SMALL.branch_length == 3
    assert SMALL.parents == (None, 0, 1, 1)
    assert SMALL.subtree_sizes() == [4, 3, 1, 1]


def test_invalid_comb():
    with pytest.raises(ValueError):
        CombTreeShape(((0, 1),))
    with pytest.raises(ValueError):
        CombTreeShape(())


def test_tree_of_hook_shape():
    red = tableau_to_tree(TableauShape((2, 1)))
    assert red.tree.segments == ((1, 0), (1, 1), (1, 0))
    assert red.marked == 3
    assert red.tree.branch_vertex(red.marked) == 2


@pytest.mark.parametrize("lam,i", [(2, 2), (3, 2), (4, 3), (1, 5), (5, 1)])
def test_tree_of_rectangle(lam, i):
    red = tableau_to_tree(TableauShape((lam,) * i))
    assert red.tree.segments == ((1, (lam - 1) * (i - 1)), (i, lam - 1))


def test_tree_of_three_block_shape():
    shape = TableauShape.from_blocks([(9, 4), (6, 4), (3, 4)])
    red = tableau_to_tree(shape)
    s_prime = shape.size - 12 - 9 + 1
    assert red.tree.segments == ((1, s_prime), (4, 3), (4, 3), (4, 2))


def test_extension_counts():
    path = CombTreeShape(((5, 0),))
    assert tree_ext_count(path) == 1
    star = CombTreeShape(((1, 3),))
    assert tree_ext_count(star) == 6 == len(brute_force_linear_extensions(star))
    assert tree_ext_count(SMALL) == len(brute_force_linear_extensions(SMALL)) == 2


@given(combs())
@settings(max_examples=80, deadline=None)
def test_hook_formula_for_trees(tree):
    if tree.size <= 10:
        exts = brute_force_linear_extensions(tree)
        assert len(exts) == tree_ext_count(tree)
        assert all(e.is_valid() for e in exts)
    assert tree.poset().count_extensions() == tree_ext_count(tree)


def test_poset_on_antichain_and_chain():
    assert FinitePoset(((),) * 4).count_extensions() == 24
    chain = poset_from_parents([None, 0, 1, 2])
    assert list(chain.extensions()) == [(1, 2, 3, 4)]


def test_invalid_extension():
    assert not LinearExtension(SMALL, (2, 1, 3, 4)).is_valid()
    assert not LinearExtension(SMALL, (1, 2, 3, 3)).is_valid()


def test_sampler_on_path():
    assert sample_linear_extension(CombTreeShape(((4, 0),)), seed=1).labels == (1, 2, 3, 4)


def test_sampler_star_frequencies():
    star = CombTreeShape(((1, 3),))
    rng = np.random.Generator(np.random.PCG64(8))
    counts = Counter(sample_linear_extension(star, rng).labels for _ in range(60_000))
    assert len(counts) == 6
    assert all(abs(c / 60_000 - 1 / 6) < 0.01 for c in counts.values())


@pytest.mark.parametrize("tree", [SMALL, CombTreeShape(((2, 1), (1, 2), (2, 1)))], ids=["small", "medium"])
def test_sampler_chi_square(tree):
    rng = np.random.Generator(np.random.PCG64(9))
    v = tree.last_branch_vertex
    law = extension_label_law(tree, v)
    runs = 10**5 if tree is SMALL else 20_000
    counts = Counter(sample_linear_extension(tree, rng).labels[v] for _ in range(runs))
    keys = sorted(law)
    obs = [counts.get(k, 0) for k in keys]
    exp = [float(law[k]) * runs for k in keys]
    assert chisquare(obs, exp).pvalue > 0.01


@given(shapes(max_cells=10))
@settings(max_examples=60, deadline=None)
def test_corner_plus_one_is_tree_label(shape):
    red = tableau_to_tree(shape)
    tree_law = extension_label_law(red.tree, red.tree.branch_vertex(red.marked))
    assert law_shift(corner_distribution_exact(shape), 1) == tree_law


@given(combs(max_segments=4, max_i=3, max_j=3))
@settings(max_examples=80, deadline=None)
def test_urn_schedule_recovers_complement_law(tree):
    # |S| - E_S(v) + 1 has the law of the final black count
    assert law_shift(complement_law(tree), 1) == tree_to_urn(tree).distribution()


def test_small_comb_urn():
    sched = tree_to_urn(SMALL)
    assert (sched.b0, sched.w0) == (1, 1)
    assert law_shift(complement_law(SMALL), 1) == sched.distribution() == {1: Fraction(1, 2), 2: Fraction(1, 2)}


@pytest.mark.parametrize("i,j", [(1, 0), (3, 2), (2, 5)])
def test_single_segment_is_deterministic(i, j):
    sched = tree_to_urn(CombTreeShape(((i, j),)))
    assert sched.steps == ()
    assert sched.distribution() == {j + 1: 1}


@pytest.mark.parametrize("ell,p,n", [(1, 2, 4), (2, 3, 3), (1, 1, 5), (3, 2, 2)])
def test_young_polya_tree_gives_periodic_urn(ell, p, n):
    tree = young_polya_tree(ell, p, n)
    assert tree.segments == ((ell, p),) * (n - 1) + ((ell, p - 1),)
    spec = tree_to_urn(tree).as_periodic()
    if n > 1:
        assert spec == UrnSpec(p, (0,) * (p - 1) + (ell,), p, ell)


def test_enumerate_combs_counts():
    trees = enumerate_combs(4)
    assert len(set(trees)) == len(trees)
    assert all(t.size <= 4 for t in trees)
    assert CombTreeShape(((1, 1), (1, 1))) in trees
    # compositions of sizes into (i >= 1, j >= 0) segments
    assert len(enumerate_combs(1)) == 1 and len(enumerate_combs(2)) == 4


def test_law_shift_reflect():
    law = {1: Fraction(1, 3), 3: Fraction(2, 3)}
    assert law_shift(law, 0, reflect=4) == {3: Fraction(1, 3), 1: Fraction(2, 3)}
    assert sum(law_shift(law, 2).values()) == 1
