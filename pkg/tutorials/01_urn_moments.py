"""Walk through the periodic urn: exact histories, moments and their limit."""
import numpy as np
import mpmath

from perioda.urn import UrnSpec, exact_distribution
from perioda.harness import rescaled_urn_samples
from perioda.enumeration import (total_histories, exact_factorial_moment,
                                 asymptotic_moment_constant, guess_p_recurrence)
from perioda.limit_laws import GenGammaProdSpec, gengammaprod_moment, gengammaprod_sample

# PART I: the Young-Polya urn with period 2, one extra white ball on even draws
spec = UrnSpec.young_polya(2, 1)
print(spec, "delta =", spec.delta)
for n in range(4):
    print(n, exact_distribution(spec, n).weights)

# PART II: history counts and the recurrence they satisfy
seq = [total_histories(spec, n) for n in range(30)]
print(seq[:9])
rec = guess_p_recurrence(seq, 2, 2)
print(rec.to_json())

# PART III: the mean grows like n^(2/3)
for n in (10, 100, 1000, 10000):
    m = exact_factorial_moment(spec, 1, n)
    print(n, float(m) / n ** (2 / 3))
print("constant:", asymptotic_moment_constant(spec, 1))

# PART IV: the rescaled count B_n / n^(2/3) against the limit law
law = GenGammaProdSpec.young_polya(2, 1)
n = 2000
b = rescaled_urn_samples(spec, n, 20000, seed=1)
for r in (1, 2, 3):
    print(r, np.mean(b ** r), gengammaprod_moment(r, law))

# the limit sampler gives the same moments
y = gengammaprod_sample(law, seed=2, size=10**5)
print(np.mean(y), np.mean(y ** 2), np.mean(y ** 3))
