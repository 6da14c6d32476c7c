"""History totals, factorial moments and P-recurrence guessing.

Every quantity here is exact except ``closed_form_total`` and
``asymptotic_moment_constant``, which return mpmath reals at the working
precision (``PERIODA_PRECISION``, default 50 digits).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence

import mpmath

from ._precision import working_precision
from .urn import UrnSpec, validate_spec


def _phase_offset(spec: UrnSpec, n: int) -> Fraction:
    # b_n in h_{n+1} = ((1 + l/p) n + b_n) h_n
    i = n % spec.p
    return spec.s0 + sum(spec.ells[:i]) - Fraction(i * spec.ell, spec.p)


def _balls(spec: UrnSpec, n: int) -> int:
    coeff = (1 + Fraction(spec.ell, spec.p)) * n + _phase_offset(spec, n)
    if coeff.denominator != 1:
        raise AssertionError(f"non-integral ball count {coeff} at n={n}")
    return coeff.numerator


def total_histories(spec: UrnSpec, n: int) -> int:
    """Number of weighted histories of length ``n`` (the total ``h_n``)."""
    validate_spec(spec)
    h = 1
    for t in range(n):
        h *= _balls(spec, t)
    return h


def closed_form_total(spec: UrnSpec, n: int) -> mpmath.mpf:
    """Gamma-function form of ``h_n`` for urns with ``ells = (0, ..., 0, l)``.

    Steps ``t = p*m + i`` see ``s0 + i + m(p + l)`` balls, so grouping the
    factors by residue gives a product of ``p`` shifted gamma ratios.
    """
    validate_spec(spec)
    if not spec.is_young_polya:
        raise ValueError("closed form requires increments of the form (0, ..., 0, l)")
    q = spec.p + spec.ell
    with working_precision():
        log_h = mpmath.mpf(0)
        for i in range(spec.p):
            count = 0 if n <= i else (n - 1 - i) // spec.p + 1
            a = mpmath.mpf(spec.s0 + i) / q
            log_h += count * mpmath.log(q) + mpmath.loggamma(a + count) - mpmath.loggamma(a)
        return +mpmath.exp(log_h)


def lah_number(r: int, j: int) -> int:
    """Unsigned Lah number ``C(r-1, j-1) r!/j!``."""
    if not 1 <= j <= r:
        raise ValueError(f"need 1 <= j <= r, got r={r}, j={j}")
    return comb(r - 1, j - 1) * factorial(r) // factorial(j)


def _falling(x: int, r: int) -> int:
    out = 1
    for i in range(r):
        out *= x - i
    return out


def _numerators(spec: UrnSpec, r: int, n: int) -> list[int]:
    # row[q] = h_n^{(q)} for q = 0..r
    validate_spec(spec)
    row = [_falling(spec.b0, q) for q in range(r + 1)]
    for t in range(n):
        balls = _balls(spec, t)
        for q in range(r, 0, -1):
            row[q] = (balls + q) * row[q] + q * (q - 1) * row[q - 1]
        row[0] *= balls
    return row


def factorial_moment_numerator(spec: UrnSpec, r: int, n: int) -> int:
    """``h_n^{(r)}``: history-weighted sum of the r-th falling factorial of B_n."""
    if r < 0:
        raise ValueError("r must be non-negative")
    return _numerators(spec, r, n)[r]


def exact_factorial_moment(spec: UrnSpec, r: int, n: int) -> Fraction:
    """``E[B_n (B_n - 1) ... (B_n - r + 1)]`` as an exact rational."""
    row = _numerators(spec, r, n)
    return Fraction(row[r], row[0])


def exact_factorial_moments(spec: UrnSpec, r_max: int, n: int) -> list[Fraction]:
    """Factorial moments of orders ``0..r_max`` from a single pass."""
    row = _numerators(spec, r_max, n)
    return [Fraction(x, row[0]) for x in row]


def stirling2(r: int, k: int) -> int:
    if r == k:
        return 1
    if k == 0 or k > r:
        return 0
    # explicit inclusion-exclusion sum
    return sum((-1) ** (k - j) * comb(k, j) * j**r for j in range(k + 1)) // factorial(k)


def raw_from_factorial(fmoments: Sequence[Fraction]) -> list[Fraction]:
    """Convert factorial moments ``E[(X)_k]`` to raw moments ``E[X^r]``."""
    return [sum((stirling2(r, k) * fmoments[k] for k in range(r + 1)), Fraction(0))
            for r in range(len(fmoments))]


def asymptotic_moment_constant(spec: UrnSpec, r: int) -> mpmath.mpf:
    """Constant ``gamma_r`` with ``E[(B_n)_r] ~ gamma_r n^(delta r)``."""
    validate_spec(spec)
    if r == 0:
        return mpmath.mpf(1)
    q = spec.p + spec.ell
    with working_precision():
        delta = mpmath.mpf(spec.p) / q
        acc = mpmath.log(mpmath.rf(spec.b0, r)) - delta * r * mpmath.log(spec.p)
        for j in range(spec.p):
            a = mpmath.mpf(spec.s0 + j + sum(spec.ells[:j])) / q
            acc += mpmath.loggamma(a) - mpmath.loggamma(a + mpmath.mpf(r) / q)
        return +mpmath.exp(acc)


# --------------------------------------------------------------------------
# P-recurrences


@dataclass(frozen=True)
class PRecurrence:
    """``sum_i P_i(n) h(n+i) = 0`` with ``coeffs[i]`` the coefficients of ``P_i``.

    Coefficients are listed by increasing power of ``n``.
    """

    order: int
    coeffs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.order + 1:
            raise ValueError("need one coefficient polynomial per shift")
        if not any(self.coeffs[-1]):
            raise ValueError("leading coefficient polynomial vanishes")

    def poly(self, i: int, n: int) -> Fraction:
        return sum((c * n**d for d, c in enumerate(self.coeffs[i])), Fraction(0))

    def residual(self, seq: Sequence[int], n: int) -> Fraction:
        return sum((self.poly(i, n) * seq[n + i] for i in range(self.order + 1)), Fraction(0))

    def annihilates(self, seq: Sequence[int]) -> bool:
        return all(self.residual(seq, n) == 0 for n in range(len(seq) - self.order))

    def to_json(self) -> str:
        return json.dumps({
            "order": self.order,
            "coeffs": [[f"{c.numerator}/{c.denominator}" for c in row] for row in self.coeffs],
        })

    @classmethod
    def from_json(cls, text: str) -> "PRecurrence":
        data = json.loads(text)
        rows = tuple(tuple(Fraction(c) for c in row) for row in data["coeffs"])
        return cls(order=int(data["order"]), coeffs=rows)


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel via reduced row echelon form."""
    mat = [r[:] for r in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = 1 / mat[rank][col]
        mat[rank] = [x * inv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(mat):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -mat[i][fc]
        basis.append(v)
    return basis


def _fit(prefix: Sequence[int], order: int, degree: int) -> PRecurrence | None:
    width = degree + 1
    rows = []
    for n in range(len(prefix) - order):
        rows.append([Fraction(n**d * prefix[n + i])
                     for i in range(order + 1) for d in range(width)])
    kernel = _nullspace(rows, (order + 1) * width)
    # prefer a kernel vector whose leading polynomial is non-zero
    for vec in reversed(kernel):
        lead = vec[order * width:]
        top = next((c for c in reversed(lead) if c != 0), None)
        if top is None:
            continue
        vec = [c / top for c in vec]
        coeffs = tuple(_trim(vec[i * width:(i + 1) * width]) for i in range(order + 1))
        return PRecurrence(order=order, coeffs=coeffs)
    return None


def _trim(row: list[Fraction]) -> tuple[Fraction, ...]:
    while len(row) > 1 and row[-1] == 0:
        row = row[:-1]
    return tuple(row)


def guess_p_recurrence(
    prefix: Sequence[int], max_order: int, max_degree: int
) -> PRecurrence | None:
    """Find a minimal-order, then minimal-degree recurrence fitting ``prefix``.

    All available terms enter the linear system, so the returned recurrence
    annihilates the whole prefix. At least five equations beyond the number of
    unknowns are required at the largest ansatz.

    Raises:
        ValueError: if the prefix is too short for the requested ansatz.
    """
    need = (max_order + 1) * (max_degree + 2) + 5
    if len(prefix) < need:
        raise ValueError(f"need at least {need} terms, got {len(prefix)}")
    for order in range(1, max_order + 1):
        for degree in range(max_degree + 1):
            rec = _fit(prefix, order, degree)
            if rec is not None:
                return rec
    return None


def read_sequence(text: str) -> list[int]:
    return [int(line) for line in text.split() if line.strip()]


def write_sequence(values: Iterable[int]) -> str:
    return "".join(f"{v}\n" for v in values)
