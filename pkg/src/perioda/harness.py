"""Experiment orchestration and the acceptance checks behind ``verify``.

Each check returns a :class:`CheckResult`; the CLI maps a failed check to exit
status 2. Checks are deterministic given their seed.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from . import combs, corner, density, enumeration, limit_laws, tableaux, urn
from .enumeration import raw_from_factorial
from .limit_laws import GenGammaProdSpec
from .urn import UrnSpec


@dataclass(frozen=True)
class ReportRow:
    n: int | None
    r: int
    value: float
    limit: float
    stderr: float

    @property
    def relative_error(self) -> float:
        return abs(self.value / self.limit - 1)

    def z(self, bias: float = 0.0) -> float:
        """Standardised gap after forgiving a relative bias ``bias``."""
        gap = max(abs(self.value - self.limit) - bias * abs(self.limit), 0.0)
        return gap / self.stderr if self.stderr > 0 else (0.0 if gap == 0 else math.inf)


@dataclass
class ConvergenceReport:
    rows: list[ReportRow] = field(default_factory=list)

    def sorted(self) -> "ConvergenceReport":
        return ConvergenceReport(sorted(self.rows, key=lambda row: (row.r, row.n or 0)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "analytic", "empirical", "stderr"])
        for row in self.sorted().rows:
            w.writerow([row.r, f"{row.limit:.15g}", f"{row.value:.15g}", f"{row.stderr:.15g}"])
        return buf.getvalue()


def _moment_rows(samples: np.ndarray, analytic: Callable[[int], float], r_max: int,
                 n: int | None = None) -> ConvergenceReport:
    report = ConvergenceReport()
    for r in range(1, r_max + 1):
        powers = samples.astype(float) ** r
        se = float(powers.std(ddof=1) / math.sqrt(len(powers))) if len(powers) > 1 else math.inf
        report.rows.append(ReportRow(n, r, float(powers.mean()), analytic(r), se))
    return report


def rescaled_urn_samples(spec: UrnSpec, n: int, runs: int, seed: int) -> np.ndarray:
    """``(p^delta / (p + l)) B_n / n^delta`` for simulated trajectories."""
    black = urn.simulate_black_counts(spec, n, runs, seed)
    delta = float(spec.delta)
    return spec.p**delta / (spec.p + spec.ell) * black / n**delta


def mc_moment_report(sampler: str, params: dict, r_max: int, runs: int, seed: int) -> ConvergenceReport:
    """Empirical moments of a sampler against their analytic limits.

    ``sampler`` is one of ``urn`` (params: ``ells, b0, w0, n``),
    ``gengammaprod`` (``ells, b0, w0``) or ``gengamma`` (``alpha, beta``).
    """
    if r_max > 6:
        raise ValueError("r_max above 6 gives unusable empirical moments at this scale")
    if r_max == 0:
        return ConvergenceReport([ReportRow(params.get("n"), 0, 1.0, 1.0, 0.0)])
    if sampler == "urn":
        spec = UrnSpec(len(params["ells"]), tuple(params["ells"]), params["b0"], params["w0"])
        law = GenGammaProdSpec(spec.ells, spec.b0, spec.w0)
        samples = rescaled_urn_samples(spec, params["n"], runs, seed)
        return _moment_rows(samples, lambda r: float(limit_laws.gengammaprod_moment(r, law)),
                            r_max, params["n"])
    if sampler == "gengammaprod":
        law = GenGammaProdSpec(tuple(params["ells"]), params["b0"], params["w0"])
        samples = limit_laws.gengammaprod_sample(law, seed, size=runs)
        return _moment_rows(samples, lambda r: float(limit_laws.gengammaprod_moment(r, law)), r_max)
    if sampler == "gengamma":
        gp = limit_laws.GenGammaParams(params["alpha"], params["beta"])
        samples = limit_laws.gengamma_sample(gp, seed, size=runs)
        return _moment_rows(samples, lambda r: float(limit_laws.gengamma_moment(r, gp)), r_max)
    raise ValueError(f"unknown sampler {sampler!r}")


def exact_rescaled_moments(spec: UrnSpec, n: int, r_max: int) -> list[mpmath.mpf]:
    """Exact raw moments of ``(p^delta/(p+l)) B_n / n^delta`` for ``r = 0..r_max``."""
    raw = raw_from_factorial(enumeration.exact_factorial_moments(spec, r_max, n))
    delta = mpmath.mpf(spec.p) / (spec.p + spec.ell)
    scale = mpmath.power(spec.p, delta) / (spec.p + spec.ell) / mpmath.power(n, delta)
    return [mpmath.mpf(m.numerator) / m.denominator * scale**r for r, m in enumerate(raw)]


# --------------------------------------------------------------------------
# acceptance checks


@dataclass(frozen=True)
class CheckResult:
    key: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.key:2d}. {self.title}: {self.detail} ({self.seconds:.1f}s)"


YP21 = UrnSpec.young_polya(2, 1)
A293653 = [1, 2, 6, 30, 180, 1440, 12960, 142560, 1710720]


def check_history_totals(seed: int) -> tuple[bool, str]:
    got = [enumeration.total_histories(YP21, n) for n in range(9)]
    return got == A293653, f"h_0..h_8 = {got}"


def check_state_polynomials(seed: int) -> tuple[bool, str]:
    expected = {1: {2: 1, 1: 1}, 2: {3: 2, 2: 2, 1: 2}, 3: {4: 6, 3: 8, 2: 8, 1: 8}}
    got = {n: urn.exact_distribution(YP21, n).weights for n in expected}
    return got == expected, f"weights {got}"


def check_recurrence(seed: int) -> tuple[bool, str]:
    seq = [enumeration.total_histories(YP21, n) for n in range(30)]
    rec = enumeration.guess_p_recurrence(seq, 2, 2)
    F = Fraction
    expected = ((F(-3), F(-21, 4), F(-9, 4)), (F(-3, 2),), (F(1),))
    ok = rec is not None and rec.order == 2 and rec.coeffs == expected
    return ok, f"found {rec.to_json() if rec else None}"


def _mp(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


def check_mean_constant(seed: int) -> tuple[bool, str]:
    n = 10**4
    m1 = _mp(enumeration.exact_factorial_moment(YP21, 1, n))
    ratio = float(m1 / mpmath.power(n, mpmath.mpf(2) / 3))
    rel = abs(ratio / 0.9552 - 1)
    return rel < 0.01, f"E(B_n)/n^(2/3) = {ratio:.6f}, relative gap {rel:.2e}"


def check_variance_constant(seed: int) -> tuple[bool, str]:
    n = 10**4
    fm = enumeration.exact_factorial_moments(YP21, 2, n)
    var = _mp(fm[2]) + _mp(fm[1]) - _mp(fm[1]) ** 2
    ratio = float(var / mpmath.power(n, mpmath.mpf(4) / 3))
    rel = abs(ratio / 0.42068 - 1)
    return rel < 0.02, f"Var(B_n)/n^(4/3) = {ratio:.6f}, relative gap {rel:.2e}"


def check_limit_moments(seed: int) -> tuple[bool, str]:
    law = GenGammaProdSpec.young_polya(2, 1)
    m3 = limit_laws.gengammaprod_moment(3, law)
    ok = abs(m3 - mpmath.mpf(1) / 3) < 1e-12
    errs = {}
    for n in (10**3, 10**4):
        exact = exact_rescaled_moments(YP21, n, 3)
        errs[n] = [float(abs(exact[r] / limit_laws.gengammaprod_moment(r, law) - 1)) for r in (1, 2, 3)]
    ok = ok and all(b < a for a, b in zip(errs[10**3], errs[10**4]))
    return ok, (f"|m_3 - 1/3| = {float(abs(m3 - mpmath.mpf(1) / 3)):.1e}; rel. errors n=1e3 "
                f"{[f'{e:.2e}' for e in errs[10**3]]}, n=1e4 {[f'{e:.2e}' for e in errs[10**4]]}")


def check_monte_carlo(seed: int) -> tuple[bool, str]:
    report = mc_moment_report("urn", {"ells": [0, 1], "b0": 1, "w0": 1, "n": 10**4}, 3, 10**5, seed)
    zs = [row.z(bias=0.02) for row in report.rows]
    detail = ", ".join(f"r={row.r}: z={z:.2f} (raw z={row.z():.2f}, rel={row.relative_error:.2e})"
                       for row, z in zip(report.rows, zs))
    return all(z <= 3 for z in zs), "after 2% bias allowance " + detail


def law_transfer_corpus_shapes(max_cells: int = 10) -> list[tableaux.TableauShape]:
    return list(tableaux.enumerate_shapes(max_cells))


def law_transfer_corpus_combs(seed: int) -> list[combs.CombTreeShape]:
    corpus = combs.enumerate_combs(10)
    rng = np.random.Generator(np.random.PCG64(seed))
    # random combs of sizes 10..12 on top of the exhaustive list
    for _ in range(150):
        target = int(rng.integers(10, 13))
        segs = []
        used = 0
        while used < target:
            i = int(rng.integers(1, min(4, target - used) + 1))
            j = int(rng.integers(0, target - used - i + 1))
            segs.append((i, min(j, 3)))
            used += i + min(j, 3)
        corpus.append(combs.CombTreeShape(tuple(segs)))
    corpus += [combs.young_polya_tree(1, 2, 3), combs.young_polya_tree(2, 1, 3),
               combs.young_polya_tree(1, 3, 3), combs.young_polya_tree(3, 2, 2)]
    return [t for t in corpus if t.size <= 12]


def check_law_transfers(seed: int) -> tuple[bool, str]:
    bad_a = bad_b = 0
    shapes = law_transfer_corpus_shapes()
    for shape in shapes:
        red = combs.tableau_to_tree(shape)
        tree_law = combs.extension_label_law(red.tree, red.tree.branch_vertex(red.marked))
        corner_law = tableaux.corner_distribution_exact(shape)
        bad_a += combs.law_shift(corner_law, 1) != tree_law
    trees = law_transfer_corpus_combs(seed)
    for tree in trees:
        bad_b += combs.law_shift(combs.complement_law(tree), 1) != combs.tree_to_urn(tree).distribution()
    return bad_a == 0 and bad_b == 0, (
        f"(a) 1+corner vs tree label: {len(shapes) - bad_a}/{len(shapes)} shapes; "
        f"(b) |S|-E_S(v)+1 vs urn: {len(trees) - bad_b}/{len(trees)} combs")


def check_density_round_trips(seed: int) -> tuple[bool, str]:
    shapes = law_transfer_corpus_shapes()
    bad = 0
    for shape in shapes:
        dens = density.corner_density_polynomial(shape)
        bad += dens.ext != tableaux.count_syt(shape)
        bad += density.entry_law_from_density(dens) != tableaux.corner_distribution_exact(shape)
        try:
            density.filament_constant_check(shape)
        except AssertionError:
            bad += 1
        bad += sum(not density.filament_identity_holds(shape, L) for L in range(1, 5))
    return bad == 0, f"{len(shapes)} shapes, {bad} failed identities"


def check_order_statistics(seed: int) -> tuple[bool, str]:
    cases = bad = 0
    for N in range(2, 9):
        for s in range(1, N):
            for a in range(1, s + 1):
                cases += 1
                bad += corner.order_statistic_moments(N, s, a) != corner.order_statistic_bruteforce(N, s, a)
    return bad == 0, f"{cases - bad}/{cases} parameter triples agree"


ARCSINE_CORPUS = [(1, 1, n) for n in range(1, 9)] + [(2, 3, 4), (1, 2, 5), (3, 1, 4), (2, 2, 3)]


def check_arcsine(seed: int) -> tuple[bool, str]:
    sums_ok = all(sum(corner.argmax_position_distribution(*c).values()) == 1 for c in ARCSINE_CORPUS)
    dist = corner.arcsine_l1_distance(1, 1, 2000)
    return sums_ok and dist < 0.02, f"laws sum to 1: {sums_ok}; L1 gap to arcsine(1/2) at n=2000: {dist:.4f}"


def check_factorization(seed: int) -> tuple[bool, str]:
    yp = limit_laws.gamma_factorization_check((0, 1), 1, 1, 50)
    st = limit_laws.gamma_factorization_check((0, 1, 2), 1, 1, 50)
    return max(yp, st) < 1e-9, f"max relative error {yp:.1e} (Young-Polya), {st:.1e} (staircase)"


def check_tail_dichotomy(seed: int) -> tuple[bool, str]:
    bounded = limit_laws.subgaussian_profile(GenGammaProdSpec.young_polya(2, 1), 500)
    growing = limit_laws.subgaussian_profile(GenGammaProdSpec((2,), 1, 1), 500)
    slope_b = limit_laws.profile_growth_exponent(bounded)
    slope_g = limit_laws.profile_growth_exponent(growing)
    tail_g = [float(v) for v in growing[250:]]
    increasing = all(b > a for a, b in zip(tail_g, tail_g[1:]))
    law = GenGammaProdSpec.young_polya(2, 1)
    prof = limit_laws.tail_similarity_profile(law, limit_laws.MittagLefflerParams(2 / 3, 1.0), 200)
    shrink = abs(prof[199]) < abs(prof[49])
    ok = slope_b < 0 and slope_g > 0 and increasing and shrink
    return ok, (f"growth exponent {slope_b:.3f} for (2,1), {slope_g:.3f} for (1,2); "
                f"|s_50| = {float(abs(prof[49])):.4f}, |s_200| = {float(abs(prof[199])):.4f}")


def check_corner_experiment(seed: int) -> tuple[bool, str]:
    lim = float(limit_laws.gengammaprod_moment(1, GenGammaProdSpec((0, 1), 2, 1)))
    errs = {}
    for n in (30, 120):
        exp = corner.corner_statistic_experiment((0, 1), n, 10**4, seed)
        mean, _ = exp.mean_and_stderr()
        errs[n] = abs(mean / lim - 1)
    ok = errs[120] < 0.05 and errs[120] < errs[30]
    return ok, f"relative error of the mean {errs[30]:.4f} at n=30, {errs[120]:.4f} at n=120"


ACCEPTANCE: list[tuple[int, str, Callable[[int], tuple[bool, str]]]] = [
    (1, "history totals", check_history_totals),
    (2, "state polynomials", check_state_polynomials),
    (3, "recurrence guessing", check_recurrence),
    (4, "mean constant", check_mean_constant),
    (5, "variance constant", check_variance_constant),
    (6, "limit-law moments", check_limit_moments),
    (7, "Monte Carlo concordance", check_monte_carlo),
    (8, "exact law transfers", check_law_transfers),
    (9, "density-method round trips", check_density_round_trips),
    (10, "order statistics", check_order_statistics),
    (11, "arcsine law", check_arcsine),
    (12, "gamma factorization", check_factorization),
    (13, "tail dichotomy", check_tail_dichotomy),
    (14, "corner-statistic experiment", check_corner_experiment),
]


# wall-clock budget in seconds per criterion
BUDGETS = {1: 1, 2: 1, 3: 5, 4: 5, 5: 5, 6: 30, 7: 120, 8: 60, 9: 120, 10: 10, 11: 30, 12: 5, 13: 10, 14: 300}


def run_check(key: int, seed: int = 42) -> CheckResult:
    for k, title, fn in ACCEPTANCE:
        if k == key:
            start = time.perf_counter()
            passed, detail = fn(seed)
            seconds = time.perf_counter() - start
            if seconds > BUDGETS[k]:
                passed = False
                detail += f"; over the {BUDGETS[k]}s budget"
            return CheckResult(k, title, bool(passed), detail, seconds)
    raise ValueError(f"unknown acceptance criterion {key}")


def run_all(seed: int = 42) -> list[CheckResult]:
    return [run_check(k, seed) for k, _, _ in ACCEPTANCE]
