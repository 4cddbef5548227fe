"""Certified distillation and dilution lower bounds as n_max grows.

Writes one CSV row per (direction, n) with the best ratio found so far,
next to the entropy ratio the bounds converge towards.

    python3 scripts/monoid_convergence.py --p 0.75 --nmax 200 --out monoid.csv
"""

import argparse
import csv
import sys

from locc_rates import functionals as fn
from locc_rates.monoid import BipartitePureMonoid, achievable_rate_lower_bound, monoid_of_bipartite_pure
from locc_rates.states import schmidt_state


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=0.75, help="largest Schmidt weight of the source")
    ap.add_argument("--delta", type=float, default=0.05)
    ap.add_argument("--eps", type=float, default=0.05)
    ap.add_argument("--nmax", type=int, default=200)
    ap.add_argument("--majorization-only", action="store_true", help="disable the probabilistic route")
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    M = BipartitePureMonoid(probabilistic=not args.majorization_only)
    x = monoid_of_bipartite_pure(schmidt_state([args.p, 1 - args.p]))
    h = fn.binary_entropy(args.p)
    runs = {
        "distillation": (achievable_rate_lower_bound(M, x, M.generator, args.delta, args.eps, args.nmax), h),
        "dilution": (achievable_rate_lower_bound(M, M.generator, x, args.delta, args.eps, args.nmax), 1 / h),
    }
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["direction", "n", "d", "m", "ratio", "best_so_far", "entropy_ratio"])
    for name, (res, target) in runs.items():
        best = 0.0
        for row in res.table:
            best = max(best, row.ratio)
            w.writerow([name, row.n, row.d, row.m, f"{row.ratio:.6f}", f"{best:.6f}", f"{target:.6f}"])
        print(f"{name}: best {res.best_ratio:.4f} at n={res.witness.n}, entropy ratio {target:.4f}", file=sys.stderr)
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
