"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

Exponent = tuple[int, ...]


@dataclass(frozen=True)
class SparsePolynomial:
    arity: int
    terms: Mapping[Exponent, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[Exponent, Fraction] = {}
        for exp, c in self.terms.items():
            if len(exp) != self.arity:
                raise ValueError(f"exponent {exp} does not match arity {self.arity}")
            if c != 0:
                clean[tuple(exp)] = Fraction(c)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def constant(cls, c: Fraction | int, arity: int) -> "SparsePolynomial":
        return cls(arity, {(0,) * arity: Fraction(c)})

    @classmethod
    def variable(cls, i: int, arity: int) -> "SparsePolynomial":
        exp = [0] * arity
        exp[i] = 1
        return cls(arity, {tuple(exp): Fraction(1)})

    @classmethod
    def univariate(cls, coeffs: Iterable[Fraction | int]) -> "SparsePolynomial":
        return cls(1, {(d,): Fraction(c) for d, c in enumerate(coeffs)})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __add__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return SparsePolynomial(self.arity, out)

    def __neg__(self) -> "SparsePolynomial":
        return SparsePolynomial(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        return self + (-other)

    def scale(self, c: Fraction | int) -> "SparsePolynomial":
        return SparsePolynomial(self.arity, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return SparsePolynomial(self.arity, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self.terms.items())))

    def lift(self, arity: int, positions: Iterable[int]) -> "SparsePolynomial":
        """Embed into ``arity`` variables, sending variable ``k`` to ``positions[k]``."""
        pos = list(positions)
        out = {}
        for e, c in self.terms.items():
            new = [0] * arity
            for k, d in enumerate(e):
                new[pos[k]] += d
            out[tuple(new)] = c
        return SparsePolynomial(arity, out)

    def antiderivative(self, i: int) -> "SparsePolynomial":
        out = {}
        for e, c in self.terms.items():
            new = list(e)
            new[i] += 1
            out[tuple(new)] = c / new[i]
        return SparsePolynomial(self.arity, out)

    def substitute_constant(self, i: int, value: Fraction | int) -> "SparsePolynomial":
        out: dict[Exponent, Fraction] = {}
        v = Fraction(value)
        for e, c in self.terms.items():
            new = list(e)
            d = new[i]
            new[i] = 0
            key = tuple(new)
            out[key] = out.get(key, Fraction(0)) + c * v**d
        return SparsePolynomial(self.arity, out)

    def substitute_variable(self, i: int, j: int) -> "SparsePolynomial":
        """Replace variable ``i`` by a different variable ``j``."""
        if i == j:
            raise ValueError("cannot substitute a variable by itself")
        out: dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            new = list(e)
            new[j] += new[i]
            new[i] = 0
            key = tuple(new)
            out[key] = out.get(key, Fraction(0)) + c
        return SparsePolynomial(self.arity, out)

    def integrate(self, i: int, lower: int | Fraction | tuple[str, int],
                  upper: int | Fraction | tuple[str, int]) -> "SparsePolynomial":
        """Definite integral in variable ``i``.

        A bound is either a constant or ``("var", j)`` for variable ``j``.
        """
        anti = self.antiderivative(i)

        def at(bound: int | Fraction | tuple[str, int]) -> SparsePolynomial:
            if isinstance(bound, tuple):
                return anti.substitute_variable(i, bound[1])
            return anti.substitute_constant(i, bound)

        return at(upper) - at(lower)

    def project(self, keep: Iterable[int]) -> "SparsePolynomial":
        """Restrict to the variables in ``keep``; the others must not occur."""
        idx = list(keep)
        dropped = set(range(self.arity)) - set(idx)
        out = {}
        for e, c in self.terms.items():
            if any(e[d] for d in dropped):
                raise ValueError("cannot drop a variable that still occurs")
            out[tuple(e[k] for k in idx)] = c
        return SparsePolynomial(len(idx), out)

    def coefficients(self) -> list[Fraction]:
        """Dense coefficient list of a univariate polynomial."""
        if self.arity != 1:
            raise ValueError("dense coefficients need a univariate polynomial")
        deg = self.degree()
        return [self.terms.get((d,), Fraction(0)) for d in range(deg + 1)]

    def __call__(self, *point: Fraction | int) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, d in zip(point, e):
                term *= Fraction(x) ** d
            total += term
        return total

    def integral_01(self) -> Fraction:
        """Integral over the unit cube."""
        total = Fraction(0)
        for e, c in self.terms.items():
            den = 1
            for d in e:
                den *= d + 1
            total += c / den
        return total

    def to_json(self) -> str:
        terms = [{"exp": list(e), "coef": f"{c.numerator}/{c.denominator}"}
                 for e, c in sorted(self.terms.items())]
        return json.dumps({"arity": self.arity, "terms": terms})

    @classmethod
    def from_json(cls, text: str) -> "SparsePolynomial":
        data = json.loads(text)
        return cls(int(data["arity"]),
                   {tuple(t["exp"]): Fraction(t["coef"]) for t in data["terms"]})


def one_minus_x_power(k: int) -> SparsePolynomial:
    """``(1 - x)^k`` as a univariate polynomial."""
    return SparsePolynomial.univariate([(-1) ** d * comb(k, d) for d in range(k + 1)])
