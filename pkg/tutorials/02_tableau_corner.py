"""The south-east corner of a large triangular tableau, three ways."""
import numpy as np

from perioda.tableaux import TableauShape, count_syt, hook_walk_sample, corner_distribution_exact
from perioda.combs import tableau_to_tree, tree_to_urn, extension_label_law
from perioda.corner import (corner_statistic_experiment, exact_corner_gap_moments,
                            argmax_position_probabilities, arcsine_l1_distance)
from perioda.limit_laws import gengammaprod_moment

# PART I: a small shape, its fillings and the corner law
shape = TableauShape.triangular(1, 2, 2)
print(shape.columns, count_syt(shape))
print(hook_walk_sample(shape, seed=0).as_lists())
print(corner_distribution_exact(shape))

# PART II: the same law read off a comb tree, then off an urn
red = tableau_to_tree(shape)
print(red.tree.segments, "marked branch vertex", red.marked)
print(extension_label_law(red.tree, red.tree.branch_vertex(red.marked)))
print(tree_to_urn(red.subtree).distribution())

# PART III: hook walks on triangular shapes, rescaled corner gap
for n in (30, 60, 120):
    exp = corner_statistic_experiment((0, 1), n, 5000, seed=n)
    exact, _ = exact_corner_gap_moments(exp.shape)
    print(n, exp.mean_and_stderr(), exp.scale * float(exact) / n ** (1 + exp.delta))
print("limit mean", gengammaprod_moment(1, exp.limit))

# PART IV: the column of the largest entry in the staircase
n = 2000
probs = argmax_position_probabilities(1, 1, n)
x = np.arange(1, n + 1) / n
print(np.round(n * probs[::200], 4))
print(np.round(8 / np.pi * np.sqrt(x * (1 - x))[::200], 4))
print("L1 distance to arcsine(1/2):", arcsine_l1_distance(1, 1, n))
