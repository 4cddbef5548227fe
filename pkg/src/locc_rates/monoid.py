"""Preordered commutative monoids and a certified search for achievable rates.

The search looks for witnesses of ``x**n * g**floor(delta*n) >= y**m`` (with
the order relaxed to purified distance ``eps``) and reports the best
``m / n`` found.  Every reported ratio comes with its witness, so it is a
lower bound on the relaxed rate as long as the order oracle is sound.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Generic, TypeVar

from .spectra import Cumulative, SchmidtSpectrum, combine, schmidt_spectrum, spectrum_power, truncate_spectrum
from .states import Cut, PureState, StateError

T = TypeVar("T")

N_MAX_DEFAULT = 200
N_MAX_CAP = 5000
M_CAP = 10**7
MAJORIZATION_TOL = 1e-12


class OracleError(RuntimeError):
    """The order oracle contradicted a property the search relies on."""


class Monoid(Generic[T]):
    """Commutative monoid with a generator and an eps-relaxed order oracle.

    Subclasses provide ``unit``, ``generator``, ``combine`` and ``geq``;
    ``power`` may be overridden with something faster than squaring.
    """

    unit: T
    generator: T

    def combine(self, x: T, y: T) -> T:
        raise NotImplementedError

    def geq(self, x: T, y: T, eps: float) -> bool:
        """Whether x reaches within purified distance ``eps`` of y."""
        raise NotImplementedError

    def power(self, x: T, n: int) -> T:
        result, base = self.unit, x
        while n:
            if n & 1:
                result = self.combine(result, base)
            base = self.combine(base, base)
            n >>= 1
        return result


class ToyMonoid(Monoid[int]):
    """Natural numbers under addition, ordered by size; eps is ignored."""

    unit = 0

    def __init__(self, generator: int = 1):
        self.generator = generator

    def combine(self, x: int, y: int) -> int:
        return x + y

    def power(self, x: int, n: int) -> int:
        return n * x

    def geq(self, x: int, y: int, eps: float) -> bool:
        return x >= y


# -- bipartite pure states ---------------------------------------------------


def majorization_geq(xs: SchmidtSpectrum, ys: SchmidtSpectrum, eps: float = 0.0) -> bool:
    """Whether the source spectrum is majorized by the (eps-truncated) target.

    For eps > 0 the target is first replaced by its top-weight truncation,
    which is within purified distance eps of it.
    """
    if eps > 0:
        ys = truncate_spectrum(ys, eps)
    cx, cy = Cumulative(xs), Cumulative(ys)
    for K in sorted(set(cx.ends) | set(cy.ends)):
        py = cy.partial(K)
        if py <= 0.5:
            gap = cx.partial(K) - py
        else:
            gap = cy.tail(K) - cx.tail(K)
        if gap > MAJORIZATION_TOL:
            return False
    return True


def conversion_probability(xs: SchmidtSpectrum, ys: SchmidtSpectrum) -> float:
    """Optimal single-shot success probability for converting x into y.

    This is min over l of (tail mass of x from atom l) / (same for y).  Both
    tails are linear between group boundaries, so the minimum is attained
    at a boundary or at the last atom of y.
    """
    cx, cy = Cumulative(xs), Cumulative(ys)
    last = cy.size - 1
    candidates = {0, last} | {K for K in cx.ends if K < last} | {K for K in cy.ends if K < last}
    best = 1.0
    for K in candidates:
        ty = cy.tail(K)
        if ty > 0:
            best = min(best, cx.tail(K) / ty)
    return max(0.0, best)


class BipartitePureMonoid(Monoid[SchmidtSpectrum]):
    """Bipartite pure states as Schmidt spectra, with the EPR pair as generator.

    The order oracle accepts ``x >= y`` at tolerance eps if either

    * x is majorized by the eps-truncation of y (deterministic LOCC onto a
      state eps-close to y), or
    * the optimal probabilistic conversion x -> y succeeds with probability
      at least 1 - eps**2; keeping the output regardless of the outcome
      gives a state with fidelity >= sqrt(1 - eps**2) to y.

    Both routes are sound; neither is the optimal approximate conversion.
    """

    unit = SchmidtSpectrum.uniform(1)
    generator = SchmidtSpectrum.uniform(2)

    def __init__(self, probabilistic: bool = True):
        self.probabilistic = probabilistic

    def combine(self, x: SchmidtSpectrum, y: SchmidtSpectrum) -> SchmidtSpectrum:
        if len(y) == 1:
            return x.scaled(y.log_weights[0], y.multiplicities[0])
        if len(x) == 1:
            return y.scaled(x.log_weights[0], x.multiplicities[0])
        return combine(x, y)

    def power(self, x: SchmidtSpectrum, n: int) -> SchmidtSpectrum:
        return self.unit if n == 0 else spectrum_power(x, n)

    def geq(self, x: SchmidtSpectrum, y: SchmidtSpectrum, eps: float) -> bool:
        if majorization_geq(x, y, eps):
            return True
        return self.probabilistic and eps > 0 and conversion_probability(x, y) >= 1 - eps * eps


def monoid_of_bipartite_pure(phi: PureState) -> SchmidtSpectrum:
    """Monoid element of a two-party pure state: its grouped Schmidt spectrum."""
    if phi.k != 2:
        raise StateError(f"bipartite monoid needs k = 2, got k = {phi.k}")
    return schmidt_spectrum(phi, Cut([1]))


# -- rate search -------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    n: int
    m: int
    d: int
    eps: float


@dataclass(frozen=True)
class RateRow:
    n: int
    d: int
    m: int

    @property
    def ratio(self) -> float:
        return self.m / self.n


@dataclass
class RateSearchResult:
    best_ratio: float
    best_fraction: Fraction
    witness: Witness
    delta: float
    table: list[RateRow] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "d", "m", "ratio", "best_so_far"])
        best = 0.0
        for row in self.table:
            best = max(best, row.ratio)
            w.writerow([row.n, row.d, row.m, repr(row.ratio), repr(best)])
        return buf.getvalue()

    def to_dict(self) -> dict[str, Any]:
        return {
            "best_ratio": self.best_ratio,
            "best_fraction": f"{self.best_fraction.numerator}/{self.best_fraction.denominator}",
            "witness": vars(self.witness),
            "delta": self.delta,
        }


def generator_budget(delta: float, n: int) -> int:
    """floor(delta * n), computed on the decimal value of delta so 0.29 * 100 gives 29."""
    return math.floor(Fraction(repr(delta)) * n)


def achievable_rate_lower_bound(
    monoid: Monoid[T],
    x: T,
    y: T,
    delta: float,
    eps: float,
    n_max: int = N_MAX_DEFAULT,
) -> RateSearchResult:
    """Best m/n over n <= n_max with x**n g**floor(delta n) >= y**m at tolerance eps."""
    if n_max < 1 or n_max > N_MAX_CAP:
        raise ValueError(f"n_max must lie in 1..{N_MAX_CAP}, got {n_max}")
    if delta < 0 or eps < 0:
        raise ValueError("delta and eps must be nonnegative")
    if monoid.geq(monoid.unit, y, eps):
        raise ValueError("target is reachable from the unit; the rate is unbounded")

    y_powers: dict[int, T] = {0: monoid.unit}

    def y_pow(m: int) -> T:
        if m not in y_powers:
            y_powers[m] = monoid.power(y, m)
        return y_powers[m]

    table: list[RateRow] = []
    best: RateRow | None = None
    for n in range(1, n_max + 1):
        d = generator_budget(delta, n)
        src = monoid.combine(monoid.power(x, n), monoid.power(monoid.generator, d))
        m = _largest_reachable(monoid, src, y_pow, eps)
        row = RateRow(n, d, m)
        table.append(row)
        if best is None or row.m * best.n > best.m * row.n:
            best = row
    frac = Fraction(best.m, best.n)
    return RateSearchResult(best.m / best.n, frac, Witness(best.n, best.m, best.d, eps), delta, table)


def _largest_reachable(monoid, src, y_pow, eps) -> int:
    lo, hi = 0, 1
    while monoid.geq(src, y_pow(hi), eps):
        lo, hi = hi, 2 * hi
        if hi > M_CAP:
            raise OracleError(f"source reaches more than {M_CAP} target copies")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if monoid.geq(src, y_pow(mid), eps):
            lo = mid
        else:
            hi = mid
    # the bisection presumes antitonicity in m; confirm it at the boundary
    if not monoid.geq(src, y_pow(lo), eps) or monoid.geq(src, y_pow(lo + 1), eps):
        raise OracleError(f"order oracle is not antitone in m around m = {lo}")
    return lo
