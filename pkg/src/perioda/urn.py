"""Periodic Pólya urns: parameters, simulation and exact state laws.

An urn starts with ``b0`` black and ``w0`` white balls. Draw ``t`` (counted
from 1) uses phase ``k = ((t - 1) mod p) + 1``. Drawing black adds one black
ball and ``ells[k-1]`` white balls; drawing white adds ``1 + ells[k-1]``
white balls. The number of balls after every draw is deterministic, so a
state at a fixed time is determined by its black count alone.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

DEFAULT_STEP_LIMIT = 2000


@dataclass(frozen=True)
class UrnSpec:
    """Parameters of a periodic urn.

    Attributes:
        p: Period (number of replacement matrices in the cycle).
        ells: Extra white balls ``(l_1, ..., l_p)`` added by each phase.
        b0: Initial black balls.
        w0: Initial white balls.
    """

    p: int
    ells: tuple[int, ...]
    b0: int
    w0: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "ells", tuple(int(x) for x in self.ells))

    @property
    def ell(self) -> int:
        return sum(self.ells)

    @property
    def s0(self) -> int:
        return self.b0 + self.w0

    @property
    def delta(self) -> Fraction:
        return Fraction(self.p, self.p + self.ell)

    @property
    def is_young_polya(self) -> bool:
        return all(x == 0 for x in self.ells[:-1])

    def matrix(self, k: int) -> tuple[tuple[int, int], tuple[int, int]]:
        """Replacement matrix of phase ``k`` (1-indexed)."""
        lk = self.ells[k - 1]
        return ((1, lk), (0, 1 + lk))

    def balls_after(self, steps: int) -> int:
        """Total number of balls after ``steps`` draws."""
        m, i = divmod(steps, self.p)
        return self.s0 + steps + m * self.ell + sum(self.ells[:i])

    def to_json(self) -> str:
        return json.dumps({"p": self.p, "ells": list(self.ells), "b0": self.b0, "w0": self.w0})

    @classmethod
    def from_json(cls, text: str) -> "UrnSpec":
        data = json.loads(text)
        try:
            ells = data["ells"]
            p = data.get("p", len(ells))
            return cls(p=int(p), ells=tuple(ells), b0=int(data["b0"]), w0=int(data["w0"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed urn parameters: {exc}") from exc

    @classmethod
    def young_polya(cls, p: int, ell: int, b0: int = 1, w0: int = 1) -> "UrnSpec":
        return cls(p=p, ells=(0,) * (p - 1) + (ell,), b0=b0, w0=w0)


def validate_spec(spec: UrnSpec) -> UrnSpec:
    """Check the invariants of ``spec`` and return it unchanged.

    Raises:
        ValueError: on a non-positive period, a length mismatch, negative
            entries or ``b0 == 0``.
    """
    if spec.p < 1:
        raise ValueError(f"period must be positive, got {spec.p}")
    if len(spec.ells) != spec.p:
        raise ValueError(f"expected {spec.p} increments, got {len(spec.ells)}")
    if any(x < 0 for x in spec.ells):
        raise ValueError(f"increments must be non-negative, got {list(spec.ells)}")
    if spec.w0 < 0:
        raise ValueError(f"w0 must be non-negative, got {spec.w0}")
    if spec.b0 < 1:
        raise ValueError(f"b0 must be at least 1, got {spec.b0}")
    return spec


def matrix_index_for_draw(spec: UrnSpec, t: int) -> int:
    """Phase ``k`` in ``1..p`` whose matrix serves draw ``t`` (``t >= 1``)."""
    if t < 1:
        raise ValueError(f"draws are counted from 1, got t={t}")
    return (t - 1) % spec.p + 1


@dataclass(frozen=True)
class UrnState:
    black: int
    white: int
    step: int

    @property
    def total(self) -> int:
        return self.black + self.white


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def simulate_trajectory(spec: UrnSpec, steps: int, seed: int) -> list[UrnState]:
    """Run one trajectory and return the ``steps + 1`` visited states."""
    validate_spec(spec)
    if steps < 0:
        raise ValueError("steps must be non-negative")
    rng = _rng(seed)
    u = rng.random(steps)
    black, white = spec.b0, spec.w0
    states = [UrnState(black, white, 0)]
    for t in range(1, steps + 1):
        lk = spec.ells[(t - 1) % spec.p]
        if u[t - 1] * (black + white) < black:
            black += 1
            white += lk
        else:
            white += 1 + lk
        states.append(UrnState(black, white, t))
    return states


def simulate_black_counts(
    spec: UrnSpec, steps: int, runs: int, seed: int, block_size: int = 10_000
) -> np.ndarray:
    """Final black counts of ``runs`` independent trajectories.

    Runs are split into blocks of ``block_size``; block ``j`` draws from a
    generator seeded with ``seed ^ j``, so results do not depend on how the
    blocks are scheduled.
    """
    validate_spec(spec)
    out = np.empty(runs, dtype=np.int64)
    totals = np.array([spec.balls_after(t) for t in range(steps)], dtype=np.float64)
    for j, start in enumerate(range(0, runs, block_size)):
        size = min(block_size, runs - start)
        rng = _rng(seed ^ j)
        black = np.full(size, spec.b0, dtype=np.int64)
        buf = np.empty(size, dtype=np.float64)
        for t in range(steps):
            rng.random(out=buf)
            buf *= totals[t]
            black += buf < black
        out[start:start + size] = black
    return out


@dataclass(frozen=True)
class ExactStateDistribution:
    """Exact history weights of the black count after ``step`` draws."""

    step: int
    weights: dict[int, int]
    total: int = field(default=0)

    def __post_init__(self) -> None:
        if self.total == 0:
            object.__setattr__(self, "total", sum(self.weights.values()))

    def probabilities(self) -> dict[int, Fraction]:
        return {b: Fraction(w, self.total) for b, w in sorted(self.weights.items())}

    def factorial_moment(self, r: int) -> Fraction:
        acc = 0
        for b, w in self.weights.items():
            f = 1
            for i in range(r):
                f *= b - i
            acc += w * f
        return Fraction(acc, self.total)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["black", "weight", "probability"])
        for b, w in sorted(self.weights.items()):
            writer.writerow([b, w, f"{Fraction(w, self.total).__float__():.15g}"])
        return buf.getvalue()


def _dp(b0: int, w0: int, increments: Iterable[tuple[bool, int]]) -> tuple[int, list[int]]:
    # weights[i] is the weight of black count b0 + i
    weights = [1]
    total = b0 + w0
    for is_draw, extra in increments:
        if is_draw:
            nxt = [0] * (len(weights) + 1)
            for i, w in enumerate(weights):
                if w:
                    b = b0 + i
                    nxt[i + 1] += w * b
                    nxt[i] += w * (total - b)
            weights = nxt
            total += 1 + extra
        else:
            total += extra
    return total, weights


def exact_distribution(
    spec: UrnSpec, n: int, limit: int = DEFAULT_STEP_LIMIT
) -> ExactStateDistribution:
    """Exact weight of every black count after ``n`` draws.

    Raises:
        ValueError: if ``n`` exceeds ``limit``.
    """
    validate_spec(spec)
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > limit:
        raise ValueError(f"n={n} exceeds the exact-enumeration limit {limit}")
    steps = ((True, spec.ells[t % spec.p]) for t in range(n))
    _, weights = _dp(spec.b0, spec.w0, steps)
    return ExactStateDistribution(
        step=n, weights={spec.b0 + i: w for i, w in enumerate(weights) if w}
    )


@dataclass(frozen=True)
class ScheduleStep:
    """One instruction of a non-periodic urn schedule.

    A draw step uses matrix ``[[1, extra], [0, 1 + extra]]``; a non-draw step
    adds ``extra`` white balls deterministically.
    """

    draw: bool
    extra: int


@dataclass(frozen=True)
class UrnSchedule:
    b0: int
    w0: int
    steps: tuple[ScheduleStep, ...]

    @property
    def draws(self) -> int:
        return sum(1 for s in self.steps if s.draw)

    def distribution(self) -> dict[int, Fraction]:
        """Exact law of the final black count."""
        _, weights = _dp(self.b0, self.w0, ((s.draw, s.extra) for s in self.steps))
        total = sum(weights)
        return {self.b0 + i: Fraction(w, total) for i, w in enumerate(weights) if w}

    def as_periodic(self) -> UrnSpec | None:
        """The periodic spec this schedule unrolls, if it is one.

        Only schedules made of draw steps are considered; the shortest period
        that reproduces the step list is returned.
        """
        if not all(s.draw for s in self.steps):
            return None
        extras = [s.extra for s in self.steps]
        n = len(extras)
        for p in range(1, max(n, 1) + 1):
            if n % p == 0 and all(extras[i] == extras[i % p] for i in range(n)):
                break
        else:
            return None
        ells = tuple(extras[:p]) if n else (0,)
        return UrnSpec(p=len(ells), ells=ells, b0=self.b0, w0=self.w0)


def read_dist_csv(text: str) -> dict[int, int]:
    rows = csv.DictReader(io.StringIO(text))
    return {int(r["black"]): int(r["weight"]) for r in rows}

