"""Periodic Pólya urns and the corner statistic of random Young tableaux."""

from .combs import CombTreeShape, tableau_to_tree, tree_ext_count, tree_to_urn
from .corner import corner_statistic_experiment, exact_corner_gap_moments, order_statistic_moments
from .density import corner_density_polynomial, entry_law_from_density
from .enumeration import (
    PRecurrence,
    asymptotic_moment_constant,
    exact_factorial_moment,
    guess_p_recurrence,
    total_histories,
)
from .limit_laws import GenGammaParams, GenGammaProdSpec, gengammaprod_moment, gengammaprod_sample
from .tableaux import TableauShape, count_syt, hook_walk_sample
from .urn import UrnSpec, exact_distribution, simulate_black_counts, simulate_trajectory

__version__ = "0.1.0"

__all__ = [
    "CombTreeShape", "GenGammaParams", "GenGammaProdSpec", "PRecurrence", "TableauShape", "UrnSpec",
    "asymptotic_moment_constant", "corner_density_polynomial", "corner_statistic_experiment",
    "count_syt", "entry_law_from_density", "exact_corner_gap_moments", "exact_distribution",
    "exact_factorial_moment", "gengammaprod_moment", "gengammaprod_sample", "guess_p_recurrence",
    "hook_walk_sample", "order_statistic_moments", "simulate_black_counts", "simulate_trajectory",
    "tableau_to_tree", "total_histories", "tree_ext_count", "tree_to_urn",
]
