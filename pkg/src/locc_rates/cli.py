"""Command-line front end: ``locc-rates <command> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import functionals as fn
from . import monoid as mo
from . import protocols as pr
from . import rates as rt
from .parsing import StateParseError, parse_state
from .states import StateError, purified_distance
from .suites import SUITES, Report, run_suite


def _emit(report: Report, as_json: bool, lines: list[str]) -> None:
    if as_json:
        print(report.to_json())
    else:
        print("\n".join(lines))


def _write_csv(text: str, target: str | None) -> None:
    if target is None:
        return
    if target == "-":
        sys.stdout.write(text)
    else:
        Path(target).write_text(text)


def cmd_rate(args) -> int:
    phi, psi = parse_state(args.source), parse_state(args.target)
    report = Report("rate", {"from": args.source, "to": args.target})
    est = rt.rate_upper_bound(phi, psi)
    report.record("rate", est.value, 1e-12, True, kind=est.kind.value, certificate=est.certificate)
    lines = [f"rate: {est.value:.9f}", f"kind: {est.kind.value}", f"certificate: {est.certificate}"]
    if phi.k >= 3:
        separates = rt.family_separates(phi, psi)
        report.record("family_separates", float(separates), 0.0, True)
        report.notes.append("multipartite rate: minimum over cut entropies, an upper bound only")
        lines.append("note: multipartite value is an upper bound from cut entropies")
        if not separates:
            report.notes.append("the built-in family cannot separate these states")
            lines.append("note: every cut entropy agrees on both states; the family cannot separate them")
    _emit(report, args.json, lines)
    return 0


def cmd_ghz_bounds(args) -> int:
    phi = parse_state(args.state)
    b = rt.ghz_rate_bounds(phi)
    report = Report("ghz-bounds", {"state": args.state})
    report.record("ghz_distillation_upper", b.distill_upper, 1e-12, True)
    report.record("ghz_cost_lower", b.cost_lower, 1e-12, True)
    lines = [f"GHZ distillation rate <= {b.distill_upper:.9f}", f"GHZ cost >= {b.cost_lower:.9f}"]
    if args.compare:
        other = parse_state(args.compare)
        separates = rt.family_separates(phi, other)
        report.inputs["compare"] = args.compare
        report.record("family_separates", float(separates), 0.0, True)
        if not separates:
            msg = "the built-in family cannot separate these states"
            report.notes.append(msg)
            lines.append(f"note: {msg}")
    _emit(report, args.json, lines)
    return 0


def cmd_monoid_rate(args) -> int:
    M = mo.BipartitePureMonoid()
    phi, psi = parse_state(args.source), parse_state(args.target)
    x, y = mo.monoid_of_bipartite_pure(phi), mo.monoid_of_bipartite_pure(psi)
    res = mo.achievable_rate_lower_bound(M, x, y, args.delta, args.eps, args.nmax)
    report = Report("monoid-rate", {"from": args.source, "to": args.target, "delta": args.delta,
                                    "eps": args.eps, "nmax": args.nmax})
    report.record("lower_bound", res.best_ratio, 0.0, True, kind="lower_bound", **res.to_dict())
    w = res.witness
    lines = [
        f"lower bound: {res.best_ratio:.9f} ({res.best_fraction})",
        f"witness: n={w.n} m={w.m} d={w.d} eps={w.eps}",
    ]
    _write_csv(res.to_csv(), args.csv)
    if args.csv != "-":
        _emit(report, args.json, lines)
    return 0


def cmd_concentrate(args) -> int:
    n, p = args.n, args.p
    h = fn.binary_entropy(p)
    report = Report("concentrate", {"n": n, "p": p})
    y, e = pr.concentration_yield(n, p), pr.expected_log_ghz(n, p)
    report.record("concentration_yield", y, 0.0, y <= h + 1e-12, entropy=h)
    report.record("expected_log_ghz", e, 0.0, e <= h + 1e-12, entropy=h)
    lines = [f"yield per copy: {y:.9f}", f"expected log GHZ rank per copy: {e:.9f}", f"h(p): {h:.9f}"]
    if args.simulate:
        sim = pr.concentration_simulate(n, p, args.shots, args.seed)
        dev = abs(sim.mean - y)
        report.inputs.update(shots=args.shots, seed=args.seed)
        report.record("simulated_mean", sim.mean, 3 * sim.std_error, dev <= 3 * sim.std_error + 1e-12)
        lines.append(f"simulated mean: {sim.mean:.9f} +/- {sim.std_error:.2e}")
    if args.csv:
        rows = ["n,yield,expected_log_ghz,h"]
        for m in sorted({int(round(v)) for v in _geomspace(1, n, 40)}):
            rows.append(f"{m},{pr.concentration_yield(m, p)!r},{pr.expected_log_ghz(m, p)!r},{h!r}")
        _write_csv("\n".join(rows) + "\n", args.csv)
    if args.csv != "-":
        _emit(report, args.json, lines)
    return 0 if report.ok else 1


def _geomspace(a: float, b: float, num: int) -> list[float]:
    if b <= a:
        return [a]
    r = (b / a) ** (1 / (num - 1))
    return [a * r**i for i in range(num)]


def cmd_continuity(args) -> int:
    phi, psi = parse_state(args.state_a), parse_state(args.state_b)
    if phi.dims != psi.dims:
        raise StateError(f"states live on different dims {phi.dims} and {psi.dims}")
    D = purified_distance(phi, psi)
    report = Report("continuity", {"state_a": args.state_a, "state_b": args.state_b})
    report.record("purified_distance", D, 1e-9, True)
    lines = [f"purified distance: {D:.9f}"]
    if D < 1:
        a, b = fn.continuity_a(D, phi.k), fn.continuity_b(D, phi.k)
        lines.append(f"a(D) = {a:.9f}, b(D) = {b:.9f}")
        report.record("a", a, 0.0, True)
        report.record("b", b, 0.0, True)
    for E in fn.cut_entropies(phi.k):
        chk = fn.check_continuity_estimate(E, phi, psi)
        report.record("continuity_margin", chk.residual, 1e-9, chk.passed, functional=E.label)
        lines.append(f"{E.label}: margin {chk.residual:.6g} {'ok' if chk.passed else 'VIOLATED'}")
    if 0 < D < 1:
        c = pr.continuity_construction(phi, psi)
        chk = pr.continuity_protocol_check(c, phi, psi)
        report.record("projection_proportional", chk.residual, 1e-9, chk.passed, q=c.q, u=c.u)
        lines.append(f"construction: q = lambda = {c.q:.9f}, u = {c.u:.9f}, projection residual {chk.residual:.2e}")
    _emit(report, args.json, lines)
    return 0 if report.ok else 1


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed)
    s = report.summary()
    lines = []
    for r in report.results:
        if not r["pass"]:
            lines.append(f"FAIL {r['check']}: value={r['value']!r} tol={r['tolerance']!r}")
    lines.append(f"suite {args.suite} (seed {args.seed}): {s['passed']}/{s['total']} checks passed")
    _emit(report, args.json, lines)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for any randomness")

    parser = argparse.ArgumentParser(prog="locc-rates", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", parents=[common], help="cut-entropy rate bound between two states")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("ghz-bounds", parents=[common], help="GHZ distillation/cost bounds")
    p.add_argument("--state", required=True)
    p.add_argument("--compare", help="second state to test whether the family separates them")
    p.set_defaults(func=cmd_ghz_bounds)

    p = sub.add_parser("monoid-rate", parents=[common], help="certified lower bound for bipartite pure states")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--nmax", type=int, default=mo.N_MAX_DEFAULT)
    p.add_argument("--csv", help="write the per-n table to this path ('-' for stdout)")
    p.set_defaults(func=cmd_monoid_rate)

    p = sub.add_parser("concentrate", parents=[common], help="entanglement concentration yields")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--simulate", action="store_true")
    p.add_argument("--shots", type=int, default=10000)
    p.add_argument("--csv", help="write per-n yields to this path ('-' for stdout)")
    p.set_defaults(func=cmd_concentrate)

    p = sub.add_parser("continuity", parents=[common], help="continuity estimate for a pair of states")
    p.add_argument("--state-a", required=True)
    p.add_argument("--state-b", required=True)
    p.set_defaults(func=cmd_continuity)

    p = sub.add_parser("verify", parents=[common], help="run a seeded verification suite")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StateParseError, StateError, ValueError, mo.OracleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
