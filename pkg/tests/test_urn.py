import json
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chisquare

from conftest import urn_specs
from perioda.enumeration import total_histories
from perioda.urn import (
    ExactStateDistribution, ScheduleStep, UrnSchedule, UrnSpec, exact_distribution,
    matrix_index_for_draw, read_dist_csv, simulate_black_counts, simulate_trajectory, validate_spec,
)

YP = UrnSpec.young_polya(2, 1)


def test_young_polya_fields():
    assert YP.ells == (0, 1)
    assert YP.delta == Fraction(2, 3)
    assert YP.ell == 1
    assert YP.s0 == 2


def test_classical_urn_has_delta_one():
    assert validate_spec(UrnSpec(1, (0,), 1, 1)).delta == 1


@pytest.mark.parametrize("spec", [
    UrnSpec(2, (0, 1), 0, 1),
    UrnSpec(2, (0,), 1, 1),
    UrnSpec(2, (0, -1), 1, 1),
    UrnSpec(0, (), 1, 1),
    UrnSpec(1, (0,), 1, -1),
])
def test_invalid_specs(spec):
    with pytest.raises(ValueError):
        validate_spec(spec)


@pytest.mark.parametrize("p,t,k", [(2, 1, 1), (2, 2, 2), (3, 7, 1), (3, 3, 3)])
def test_matrix_index(p, t, k):
    assert matrix_index_for_draw(UrnSpec.young_polya(p, 1), t) == k


def test_matrix_index_rejects_zero():
    with pytest.raises(ValueError):
        matrix_index_for_draw(YP, 0)


def test_matrices_are_balanced():
    spec = UrnSpec(3, (2, 0, 5), 1, 1)
    for k in (1, 2, 3):
        (a, b), (c, d) = spec.matrix(k)
        assert a + b == c + d == 1 + spec.ells[k - 1]


def test_trajectory_zero_steps():
    assert [(s.black, s.white) for s in simulate_trajectory(YP, 0, seed=3)] == [(1, 1)]


def test_first_step_is_fair():
    firsts = Counter((simulate_trajectory(YP, 1, seed=s)[-1].black) for s in range(4000))
    assert set(firsts) == {1, 2}
    assert abs(firsts[1] / 4000 - 0.5) < 0.03


@pytest.mark.parametrize("seed", range(20))
def test_two_step_states(seed):
    last = simulate_trajectory(YP, 2, seed)[-1]
    assert (last.black, last.white) in {(3, 2), (2, 3), (1, 4)}


@given(urn_specs(), st.integers(min_value=0, max_value=30), st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_ball_total_is_deterministic(spec, steps, seed):
    for s in simulate_trajectory(spec, steps, seed):
        assert s.black + s.white == spec.balls_after(s.step)
        assert spec.b0 <= s.black <= spec.b0 + s.step


def test_trajectory_reproducible():
    a = simulate_trajectory(YP, 50, seed=11)
    b = simulate_trajectory(YP, 50, seed=11)
    assert a == b


def test_black_counts_block_invariance():
    a = simulate_black_counts(YP, 40, 300, seed=5, block_size=100)
    b = simulate_black_counts(YP, 40, 300, seed=5, block_size=100)
    assert np.array_equal(a, b)
    assert a.min() >= 1 and a.max() <= 41


def test_black_counts_chi_square():
    n, runs = 20, 10**5
    dist = exact_distribution(YP, n).probabilities()
    sample = Counter(simulate_black_counts(YP, n, runs, seed=2024).tolist())
    keys = sorted(dist)
    obs = np.array([sample.get(k, 0) for k in keys], dtype=float)
    exp = np.array([float(dist[k]) * runs for k in keys])
    # merge sparse cells into the tail
    mask = exp >= 5
    if not mask.all():
        obs = np.append(obs[mask], obs[~mask].sum())
        exp = np.append(exp[mask], exp[~mask].sum())
    assert chisquare(obs, exp).pvalue > 0.001


def test_small_history_weights():
    assert exact_distribution(YP, 1).weights == {2: 1, 1: 1}
    assert exact_distribution(YP, 2).weights == {3: 2, 2: 2, 1: 2}
    d3 = exact_distribution(YP, 3)
    assert d3.weights == {4: 6, 3: 8, 2: 8, 1: 8}
    assert d3.total == 30


@given(urn_specs())
def test_empty_history(spec):
    d = exact_distribution(spec, 0)
    assert d.weights == {spec.b0: 1} and d.total == 1


@given(urn_specs(), st.integers(min_value=0, max_value=25))
@settings(max_examples=40, deadline=None)
def test_weights_sum_to_history_count(spec, n):
    d = exact_distribution(spec, n)
    assert d.total == total_histories(spec, n)
    assert min(d.weights) >= spec.b0 and max(d.weights) <= spec.b0 + n


def test_step_limit():
    with pytest.raises(ValueError):
        exact_distribution(YP, 11, limit=10)


def test_csv_round_trip():
    d = exact_distribution(YP, 7)
    assert read_dist_csv(d.to_csv()) == d.weights
    assert d.to_csv().splitlines()[0] == "black,weight,probability"


@given(urn_specs())
def test_json_round_trip(spec):
    assert UrnSpec.from_json(spec.to_json()) == spec


def test_malformed_json():
    with pytest.raises(ValueError):
        UrnSpec.from_json(json.dumps({"p": 2}))


def test_schedule_unrolls_to_periodic():
    sched = UrnSchedule(2, 1, tuple(ScheduleStep(True, x) for x in (0, 1, 0, 1)))
    assert sched.as_periodic() == UrnSpec(2, (0, 1), 2, 1)
    spec = sched.as_periodic()
    assert sched.distribution() == exact_distribution(spec, 4).probabilities()


def test_schedule_with_deterministic_step():
    sched = UrnSchedule(1, 1, (ScheduleStep(False, 3), ScheduleStep(True, 0)))
    assert sched.as_periodic() is None
    assert sched.distribution() == {1: Fraction(4, 5), 2: Fraction(1, 5)}


def test_factorial_moment_of_small_history():
    d = ExactStateDistribution(step=1, weights={2: 1, 1: 1})
    assert d.factorial_moment(1) == Fraction(3, 2)
    assert d.factorial_moment(2) == Fraction(1, 1)
