"""Limit laws of the rescaled black count and their tail analytics.

Moments are returned as mpmath reals at the working precision. Samplers use
numpy's PCG64 generator seeded with the caller's integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import mpmath
import numpy as np

from ._precision import working_precision


@dataclass(frozen=True)
class GenGammaParams:
    """GenGamma(alpha, beta): density ``beta t^(alpha-1) exp(-t^beta) / Gamma(alpha/beta)``."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"alpha and beta must be positive, got {self.alpha}, {self.beta}")


@dataclass(frozen=True)
class MittagLefflerParams:
    """Generalised Mittag-Leffler law; ``alpha = 1`` is the point mass at 1."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.beta > -self.alpha:
            raise ValueError(f"beta must exceed -alpha, got {self.beta}")


@dataclass(frozen=True)
class GenGammaProdSpec:
    """Product law ``Beta(b0, w0) * prod_{i in I} GenGamma(s0 + i, p + l)``.

    ``I`` is ``{1, ..., p+l-1}`` minus the partial sums
    ``l_1 + ... + l_j + j`` for ``1 <= j <= p-1``.
    """

    ells: tuple[int, ...]
    b0: int
    w0: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "ells", tuple(int(x) for x in self.ells))
        if not self.ells or any(x < 0 for x in self.ells):
            raise ValueError(f"invalid pattern {self.ells}")
        if self.b0 < 1 or self.w0 < 0:
            raise ValueError(f"invalid initial condition ({self.b0}, {self.w0})")

    @property
    def p(self) -> int:
        return len(self.ells)

    @property
    def ell(self) -> int:
        return sum(self.ells)

    @property
    def s0(self) -> int:
        return self.b0 + self.w0

    @property
    def delta(self) -> float:
        return self.p / (self.p + self.ell)

    @property
    def index_set(self) -> tuple[int, ...]:
        excluded = {j + sum(self.ells[:j]) for j in range(1, self.p)}
        return tuple(i for i in range(1, self.p + self.ell) if i not in excluded)

    @classmethod
    def young_polya(cls, p: int, ell: int, b0: int = 1, w0: int = 1) -> "GenGammaProdSpec":
        return cls(ells=(0,) * (p - 1) + (ell,), b0=b0, w0=w0)


def gengamma_density(t: float, params: GenGammaParams) -> float:
    if t <= 0:
        raise ValueError("density is supported on t > 0")
    a, b = params.alpha, params.beta
    return float(b * mpmath.power(t, a - 1) * mpmath.exp(-mpmath.power(t, b)) / mpmath.gamma(a / b))


def gengamma_moment(r: int, params: GenGammaParams) -> mpmath.mpf:
    with working_precision():
        a = mpmath.mpf(params.alpha)
        b = mpmath.mpf(params.beta)
        return +mpmath.exp(mpmath.loggamma((a + r) / b) - mpmath.loggamma(a / b))


def _rng(seed: int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def gengamma_sample(params: GenGammaParams, seed: int | np.random.Generator,
                    size: int | None = None) -> np.ndarray | float:
    """``G^(1/beta)`` with ``G ~ Gamma(alpha/beta, 1)``."""
    g = _rng(seed).standard_gamma(params.alpha / params.beta, size=size)
    return g ** (1.0 / params.beta)


def gengammaprod_moment(r: int, spec: GenGammaProdSpec) -> mpmath.mpf:
    q = spec.p + spec.ell
    with working_precision():
        lg = mpmath.loggamma
        acc = lg(spec.b0 + r) - lg(spec.b0) + lg(spec.s0) - lg(spec.s0 + r)
        for i in spec.index_set:
            acc += lg(mpmath.mpf(spec.s0 + i + r) / q) - lg(mpmath.mpf(spec.s0 + i) / q)
        return +mpmath.exp(acc)


def gengammaprod_sample(spec: GenGammaProdSpec, seed: int | np.random.Generator,
                        size: int | None = None) -> np.ndarray | float:
    rng = _rng(seed)
    q = spec.p + spec.ell
    out = rng.beta(spec.b0, spec.w0, size=size) if spec.w0 > 0 else np.ones(size or ())
    for i in spec.index_set:
        out = out * gengamma_sample(GenGammaParams(spec.s0 + i, q), rng, size=size)
    return out if size is not None else float(out)


def ml_moment(r: int, params: MittagLefflerParams) -> mpmath.mpf:
    if r == 0:
        return mpmath.mpf(1)
    with working_precision():
        a = mpmath.mpf(params.alpha)
        b = mpmath.mpf(params.beta)
        lg = mpmath.loggamma
        return +mpmath.exp(lg(b + 1) + lg(b / a + r + 1) - lg(b / a + 1) - lg(b + a * r + 1))


def tail_similarity_profile(spec: GenGammaProdSpec, ml: MittagLefflerParams,
                            r_max: int) -> list[mpmath.mpf]:
    """``s_r = log(E Y^r / (c^r E X^r)) / r`` with ``c = delta p^(delta-1)``.

    Raises:
        ValueError: if the Mittag-Leffler index differs from ``delta``.
    """
    if abs(ml.alpha - spec.delta) > 1e-12:
        raise ValueError(f"Mittag-Leffler alpha {ml.alpha} differs from delta {spec.delta}")
    with working_precision():
        delta = mpmath.mpf(spec.p) / (spec.p + spec.ell)
        log_c = mpmath.log(delta) + (delta - 1) * mpmath.log(spec.p)
        return [(mpmath.log(gengammaprod_moment(r, spec)) - r * log_c
                 - mpmath.log(ml_moment(r, ml))) / r for r in range(1, r_max + 1)]


def mutual_tail_profile(a: GenGammaProdSpec, b: GenGammaProdSpec, r_max: int) -> list[mpmath.mpf]:
    """``log(E A^r / E B^r) / r`` for two product laws."""
    with working_precision():
        return [(mpmath.log(gengammaprod_moment(r, a)) - mpmath.log(gengammaprod_moment(r, b))) / r
                for r in range(1, r_max + 1)]


def subgaussian_profile(spec: GenGammaProdSpec, r_max: int) -> list[mpmath.mpf]:
    """``q_r = (E Y^r)^(1/r) / sqrt(r)``; bounded iff the tails are subgaussian."""
    with working_precision():
        return [mpmath.exp(mpmath.log(gengammaprod_moment(r, spec)) / r) / mpmath.sqrt(r)
                for r in range(1, r_max + 1)]


def profile_growth_exponent(profile: Sequence[mpmath.mpf]) -> float:
    """Least-squares slope of ``log q_r`` against ``log r`` over the top three quarters.

    Positive slope means the profile grows without bound like a power of r.
    """
    r = np.arange(1, len(profile) + 1, dtype=float)
    lo = len(profile) // 4
    x = np.log(r[lo:])
    y = np.log(np.array([float(v) for v in profile[lo:]]))
    return float(np.polyfit(x, y, 1)[0])


def carleman_partial_sums(spec: GenGammaProdSpec, r_max: int) -> list[float]:
    """Partial sums of ``m_r^(-1/(2r))``; divergence determines the law."""
    out = []
    acc = 0.0
    with working_precision():
        for r in range(1, r_max + 1):
            acc += float(mpmath.exp(-mpmath.log(gengammaprod_moment(r, spec)) / (2 * r)))
            out.append(acc)
    return out


def dyadic_block_sums(partial: Sequence[float]) -> list[float]:
    """Increments of the partial sums over ``[2^k, 2^(k+1))``."""
    blocks = []
    k = 1
    while 2 * k <= len(partial):
        blocks.append(partial[2 * k - 1] - partial[k - 1])
        k *= 2
    return blocks


# --------------------------------------------------------------------------
# Cyclic shift and factorisation


def pattern_to_path(ells: Sequence[int]) -> list[tuple[int, int]]:
    """Split a pattern into ``(j_k, i_k)`` steps, listed for ``k = 1..m``.

    Reading left to right, the pattern is the concatenation over
    ``k = m, ..., 1`` of ``j_k - 1`` zeros followed by ``i_k > 0``.

    Raises:
        ValueError: if the pattern is all zeros or ends with a zero.
    """
    if not any(ells):
        raise ValueError("pattern has no positive entry")
    if ells[-1] == 0:
        raise ValueError("pattern ends with a zero and has no path form")
    reversed_steps = []
    run = 0
    for x in ells:
        run += 1
        if x > 0:
            reversed_steps.append((run, int(x)))
            run = 0
    return reversed_steps[::-1]


def path_to_pattern(path: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    out: list[int] = []
    for j, i in reversed(path):
        out.extend([0] * (j - 1) + [i])
    return tuple(out)


def cyclic_shift(ells: Sequence[int]) -> tuple[int, ...]:
    """Cyclic shift of a pattern.

    The path ``(j_1, i_1; ...; j_m, i_m)`` becomes
    ``(i_1, j_m; i_2, j_1; ...; i_m, j_{m-1})``, which exchanges the roles of
    ``p`` and ``l``.
    """
    path = pattern_to_path(ells)
    m = len(path)
    shifted = [(path[k][1], path[k - 1][0]) for k in range(m)]
    return path_to_pattern(shifted)


def first_positive_index(ells: Sequence[int]) -> int:
    for idx, x in enumerate(ells, start=1):
        if x > 0:
            return idx
    raise ValueError("pattern has no positive entry")


def gamma_factorization_check(ells: Sequence[int], b0: int, w0: int, r_max: int) -> float:
    """Max relative deviation of ``E Y^r E Y'^r (p+l)^r`` from ``Gamma(b0+r)/Gamma(b0)``."""
    y = GenGammaProdSpec(tuple(ells), b0, w0)
    y_shift = GenGammaProdSpec(cyclic_shift(ells), b0 + w0, first_positive_index(ells))
    q = y.p + y.ell
    worst = mpmath.mpf(0)
    with working_precision():
        for r in range(r_max + 1):
            lhs = gengammaprod_moment(r, y) * gengammaprod_moment(r, y_shift) * mpmath.mpf(q) ** r
            rhs = mpmath.rf(b0, r)
            worst = max(worst, abs(lhs / rhs - 1))
    return float(worst)
