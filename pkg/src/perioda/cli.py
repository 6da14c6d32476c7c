"""``perioda <group> <command> [--flag value]...``

Exit status: 0 on success, 1 on invalid input or usage, 2 when a verification
fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import combs, corner, density, enumeration, harness, limit_laws, tableaux, urn
from .limit_laws import GenGammaProdSpec

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _emit(text: str, out: str | None) -> None:
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_urn(path: str) -> urn.UrnSpec:
    return urn.validate_spec(urn.UrnSpec.from_json(_read(path)))


def _load_law(path: str) -> GenGammaProdSpec:
    data = json.loads(_read(path))
    law = data.get("law", "gengammaprod")
    if law != "gengammaprod":
        raise ValueError(f"unsupported law {law!r}")
    return GenGammaProdSpec(tuple(data["ells"]), int(data["b0"]), int(data["w0"]))


def _load_shape(path: str) -> tuple[tableaux.TableauShape, dict]:
    text = _read(path)
    data = json.loads(text)
    meta: dict = {}
    if "pattern" in data:
        pat = data["pattern"]
        meta = {"ells": tuple(pat["ells"]), "n": int(pat["n"])}
        if pat.get("shift"):
            meta.update(b0=int(pat["shift"]["b0"]), w0=int(pat["shift"]["w0"]))
    elif "triangular" in data:
        t = data["triangular"]
        meta = {"ells": (0,) * (int(t["p"]) - 1) + (int(t["ell"]),), "n": int(t["n"])}
    return tableaux.TableauShape.from_json(text), meta


def _rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _table(header: Sequence[str], rows: Sequence[Sequence[object]], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, row)) for row in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _float(x: object) -> str:
    return f"{float(x):.15g}"  # type: ignore[arg-type]


# --------------------------------------------------------------------------
# command handlers; each returns an exit status


def urn_validate(a: argparse.Namespace) -> int:
    spec = _load_urn(a.spec)
    _emit(json.dumps({"p": spec.p, "ells": list(spec.ells), "b0": spec.b0, "w0": spec.w0,
                      "ell": spec.ell, "s0": spec.s0, "delta": _rational(spec.delta)}) + "\n", a.out)
    return EXIT_OK


def urn_simulate(a: argparse.Namespace) -> int:
    spec = _load_urn(a.spec)
    if a.runs == 1:
        states = urn.simulate_trajectory(spec, a.steps, a.seed)
        rows = [(s.step, s.black, s.white) for s in states]
        _emit(_table(["step", "black", "white"], rows, a.format), a.out)
    else:
        black = urn.simulate_black_counts(spec, a.steps, a.runs, a.seed)
        total = spec.balls_after(a.steps)
        rows = [(k, int(b), total - int(b)) for k, b in enumerate(black)]
        _emit(_table(["run", "black", "white"], rows, a.format), a.out)
    return EXIT_OK


def urn_exact_dist(a: argparse.Namespace) -> int:
    spec = _load_urn(a.spec)
    dist = urn.exact_distribution(spec, a.n, limit=a.limit)
    if a.format == "json":
        rows = [(b, w, _float(Fraction(w, dist.total))) for b, w in sorted(dist.weights.items())]
        _emit(_table(["black", "weight", "probability"], rows, "json"), a.out)
    else:
        _emit(dist.to_csv(), a.out)
    return EXIT_OK


def enum_totals(a: argparse.Namespace) -> int:
    spec = _load_urn(a.spec)
    _emit(enumeration.write_sequence(enumeration.total_histories(spec, n) for n in range(a.n + 1)), a.out)
    return EXIT_OK


def enum_moments(a: argparse.Namespace) -> int:
    spec = _load_urn(a.spec)
    fm = enumeration.exact_factorial_moments(spec, a.r_max, a.n)
    rows = [(r, _rational(m), _float(m), _float(enumeration.asymptotic_moment_constant(spec, r)))
            for r, m in enumerate(fm)]
    _emit(_table(["r", "factorial_moment", "decimal", "asymptotic_constant"], rows, a.format), a.out)
    return EXIT_OK


def enum_guess(a: argparse.Namespace) -> int:
    seq = enumeration.read_sequence(_read(a.seq))
    rec = enumeration.guess_p_recurrence(seq, a.max_order, a.max_degree)
    if rec is None:
        sys.stderr.write("no recurrence found within the ansatz\n")
        return EXIT_VERIFY
    _emit(rec.to_json() + "\n", a.out)
    return EXIT_OK


def limits_moments(a: argparse.Namespace) -> int:
    law = _load_law(a.spec)
    rows = [(r, _float(limit_laws.gengammaprod_moment(r, law))) for r in range(a.r_max + 1)]
    _emit(_table(["r", "analytic"], rows, a.format), a.out)
    return EXIT_OK


def limits_sample(a: argparse.Namespace) -> int:
    law = _load_law(a.spec)
    report = harness.mc_moment_report("gengammaprod", {"ells": law.ells, "b0": law.b0, "w0": law.w0},
                                      a.r_max, a.runs, a.seed)
    _emit(report.to_csv(), a.out)
    return EXIT_OK


def limits_urn_report(a: argparse.Namespace) -> int:
    spec = _load_urn(a.spec)
    report = harness.mc_moment_report(
        "urn", {"ells": list(spec.ells), "b0": spec.b0, "w0": spec.w0, "n": a.n}, a.r_max, a.runs, a.seed)
    _emit(report.to_csv(), a.out)
    return EXIT_OK


def limits_factorization(a: argparse.Namespace) -> int:
    err = limit_laws.gamma_factorization_check(tuple(a.ells), a.b0, a.w0, a.r_max)
    shifted = limit_laws.cyclic_shift(tuple(a.ells))
    _emit(json.dumps({"ells": a.ells, "shifted": list(shifted), "max_relative_error": err}) + "\n", a.out)
    return EXIT_OK if err < a.tol else EXIT_VERIFY


def limits_tails(a: argparse.Namespace) -> int:
    law = _load_law(a.spec)
    ml = limit_laws.MittagLefflerParams(law.delta, a.ml_beta)
    sim = limit_laws.tail_similarity_profile(law, ml, a.r_max)
    sub = limit_laws.subgaussian_profile(law, a.r_max)
    rows = [(r, _float(s), _float(q)) for r, (s, q) in enumerate(zip(sim, sub), start=1)]
    _emit(_table(["r", "similarity", "subgaussian"], rows, a.format), a.out)
    return EXIT_OK


def tableau_count(a: argparse.Namespace) -> int:
    shape, _ = _load_shape(a.shape)
    _emit(f"{tableaux.count_syt(shape)}\n", a.out)
    return EXIT_OK


def tableau_sample(a: argparse.Namespace) -> int:
    shape, _ = _load_shape(a.shape)
    filling = tableaux.hook_walk_sample(shape, a.seed)
    _emit(json.dumps(filling.as_lists()) + "\n", a.out)
    return EXIT_OK


def tableau_corner(a: argparse.Namespace) -> int:
    shape, meta = _load_shape(a.shape)
    if "ells" not in meta:
        raise ValueError("the corner experiment needs a 'pattern' or 'triangular' shape")
    exp = corner.corner_statistic_experiment(meta["ells"], meta["n"], a.runs, a.seed,
                                             meta.get("b0"), meta.get("w0"))
    _emit(exp.to_csv(), a.out)
    m, se = exp.mean_and_stderr()
    lim = float(limit_laws.gengammaprod_moment(1, exp.limit))
    sys.stderr.write(f"mean {m:.6f} +- {se:.6f}; limit mean {lim:.6f}; relative gap {abs(m / lim - 1):.4f}\n")
    if a.moments_out:
        rows = [(r, _float(limit_laws.gengammaprod_moment(r, exp.limit)),
                 _float((exp.rescaled ** r).mean()),
                 _float((exp.rescaled ** r).std(ddof=1) / len(exp.rescaled) ** 0.5))
                for r in range(1, 4)]
        Path(a.moments_out).write_text(_table(["r", "analytic", "empirical", "stderr"], rows, "csv"))
    return EXIT_OK


def tableau_corner_exact(a: argparse.Namespace) -> int:
    shape, _ = _load_shape(a.shape)
    _emit(density.law_to_csv(tableaux.corner_distribution_exact(shape)), a.out)
    return EXIT_OK


def tableau_tree(a: argparse.Namespace) -> int:
    shape, _ = _load_shape(a.shape)
    red = combs.tableau_to_tree(shape)
    sched = combs.tree_to_urn(red.subtree)
    periodic = sched.as_periodic()
    _emit(json.dumps({
        "tree": [list(s) for s in red.tree.segments],
        "marked_branch_position": red.marked,
        "subtree_size": red.subtree.size,
        "urn": {"b0": sched.b0, "w0": sched.w0,
                "steps": [[int(s.draw), s.extra] for s in sched.steps],
                "periodic": None if periodic is None else json.loads(periodic.to_json())},
    }) + "\n", a.out)
    return EXIT_OK


def tableau_argmax(a: argparse.Namespace) -> int:
    if a.exact:
        law = corner.argmax_position_distribution(a.ell, a.p, a.n)
        rows = [(k, v.numerator, v.denominator) for k, v in sorted(law.items())]
        _emit(_table(["k", "prob_num", "prob_den"], rows, a.format), a.out)
    else:
        probs = corner.argmax_position_probabilities(a.ell, a.p, a.n)
        rows = [(k * a.ell, _float(v)) for k, v in enumerate(probs, start=1)]
        _emit(_table(["column", "probability"], rows, a.format), a.out)
    return EXIT_OK


def density_corner(a: argparse.Namespace) -> int:
    shape, _ = _load_shape(a.shape)
    dens = density.corner_density_polynomial(shape)
    if a.filament:
        dens = density.filament_extension(dens, a.filament)
    _emit(dens.poly.to_json() + "\n", a.out)
    return EXIT_OK


def density_law(a: argparse.Namespace) -> int:
    shape, _ = _load_shape(a.shape)
    law = density.entry_law_from_density(density.corner_density_polynomial(shape))
    _emit(density.law_to_csv(law), a.out)
    return EXIT_OK


def density_check(a: argparse.Namespace) -> int:
    shape, _ = _load_shape(a.shape)
    dens = density.corner_density_polynomial(shape)
    ext_ok = dens.ext == tableaux.count_syt(shape)
    try:
        chk = density.filament_constant_check(shape)
        prop_ok, const = True, _rational(chk.constant)
    except AssertionError:
        prop_ok, const = False, None
    fil_ok = all(density.filament_identity_holds(shape, L) for L in range(1, a.max_filament + 1))
    _emit(json.dumps({"ext_identity": ext_ok, "proportional": prop_ok, "constant": const,
                      "filament_identity": fil_ok}) + "\n", a.out)
    return EXIT_OK if ext_ok and prop_ok and fil_ok else EXIT_VERIFY


def verify_all(a: argparse.Namespace) -> int:
    failed = False
    for key, _, _ in harness.ACCEPTANCE:
        res = harness.run_check(key, a.seed)
        print(res.line(), flush=True)
        failed |= not res.passed
    return EXIT_VERIFY if failed else EXIT_OK


def verify_one(a: argparse.Namespace) -> int:
    res = harness.run_check(a.criterion, a.seed)
    print(res.line())
    return EXIT_OK if res.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    root = _Parser(prog="perioda", description=__doc__.splitlines()[0])
    groups = root.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def cmd(group: argparse._SubParsersAction, name: str, fn, help_: str) -> argparse.ArgumentParser:
        p = group.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        return p

    g = groups.add_parser("urn", help="urn model").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = cmd(g, "validate", urn_validate, "check a spec and print derived fields")
    p.add_argument("--spec", required=True)
    p = cmd(g, "simulate", urn_simulate, "seeded trajectories")
    p.add_argument("--spec", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--runs", type=int, default=1)
    p = cmd(g, "exact-dist", urn_exact_dist, "exact black-count weights")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--limit", type=int, default=urn.DEFAULT_STEP_LIMIT)

    g = groups.add_parser("enum", help="exact enumeration").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = cmd(g, "totals", enum_totals, "h_0..h_n, one per line")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p = cmd(g, "moments", enum_moments, "exact factorial moments")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r-max", dest="r_max", type=int, default=3)
    p = cmd(g, "guess", enum_guess, "fit a P-recurrence to a sequence file")
    p.add_argument("--seq", required=True)
    p.add_argument("--max-order", dest="max_order", type=int, default=2)
    p.add_argument("--max-degree", dest="max_degree", type=int, default=2)

    g = groups.add_parser("limits", help="limit laws").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = cmd(g, "moments", limits_moments, "analytic GenGammaProd moments")
    p.add_argument("--spec", required=True)
    p.add_argument("--r-max", dest="r_max", type=int, default=6)
    p = cmd(g, "sample", limits_sample, "sampler moments against analytic values")
    p.add_argument("--spec", required=True)
    p.add_argument("--runs", type=int, default=10**5)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--r-max", dest="r_max", type=int, default=3)
    p = cmd(g, "urn-report", limits_urn_report, "simulated rescaled urn moments against the limit")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--runs", type=int, default=10**4)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--r-max", dest="r_max", type=int, default=3)
    p = cmd(g, "factorization", limits_factorization, "moment factorisation through the cyclic shift")
    p.add_argument("--ells", type=int, nargs="+", required=True)
    p.add_argument("--b0", type=int, default=1)
    p.add_argument("--w0", type=int, default=1)
    p.add_argument("--r-max", dest="r_max", type=int, default=50)
    p.add_argument("--tol", type=float, default=1e-9)
    p = cmd(g, "tails", limits_tails, "tail similarity and subgaussian profiles")
    p.add_argument("--spec", required=True)
    p.add_argument("--r-max", dest="r_max", type=int, default=200)
    p.add_argument("--ml-beta", dest="ml_beta", type=float, default=1.0)

    g = groups.add_parser("tableau", help="tableaux and trees").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = cmd(g, "count", tableau_count, "number of standard fillings")
    p.add_argument("--shape", required=True)
    p = cmd(g, "sample", tableau_sample, "one uniform filling (rows bottom to top)")
    p.add_argument("--shape", required=True)
    p.add_argument("--seed", type=int, required=True)
    p = cmd(g, "corner", tableau_corner, "hook-walk corner statistic")
    p.add_argument("--shape", required=True)
    p.add_argument("--runs", type=int, default=10**4)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--moments-out", dest="moments_out", default=None)
    p = cmd(g, "corner-exact", tableau_corner_exact, "exact corner-entry law")
    p.add_argument("--shape", required=True)
    p = cmd(g, "tree", tableau_tree, "comb tree and urn schedule of a shape")
    p.add_argument("--shape", required=True)
    p = cmd(g, "argmax", tableau_argmax, "law of the column of the largest entry")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exact", action="store_true")

    g = groups.add_parser("density", help="density method").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = cmd(g, "corner", density_corner, "corner density polynomial as JSON")
    p.add_argument("--shape", required=True)
    p.add_argument("--filament", type=int, default=0)
    p = cmd(g, "law", density_law, "corner law from the density")
    p.add_argument("--shape", required=True)
    p = cmd(g, "check", density_check, "ext, proportionality and filament identities")
    p.add_argument("--shape", required=True)
    p.add_argument("--max-filament", dest="max_filament", type=int, default=4)

    g = groups.add_parser("verify", help="acceptance checks").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = g.add_parser("all", help="run every acceptance check")
    p.set_defaults(func=verify_all)
    p.add_argument("--seed", type=int, default=42)
    p = g.add_parser("criterion", help="run one acceptance check")
    p.set_defaults(func=verify_one)
    p.add_argument("criterion", type=int)
    p.add_argument("--seed", type=int, default=42)
    return root


def run_command(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"perioda: {exc}\n")
        return EXIT_INPUT
    except (ValueError, KeyError, TypeError, json.JSONDecodeError, OSError) as exc:
        sys.stderr.write(f"perioda: {exc}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run_command())
