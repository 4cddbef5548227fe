"""Cut-entropy functionals on pure states and checks of their defining properties."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .spectra import schmidt_spectrum
from .states import Cut, PureState, StateError, all_cuts, direct_sum, purified_distance, tensor


@dataclass(frozen=True)
class Functional:
    """A named entanglement measure; currently only cut entropies.

    ``kind`` selects the evaluation rule in :func:`evaluate`, which is the
    single place new measures need to be wired in.
    """

    kind: str
    cut: Cut

    @classmethod
    def cut_entropy(cls, parties) -> "Functional":
        return cls("cut", parties if isinstance(parties, Cut) else Cut(parties))

    @property
    def label(self) -> str:
        return f"cut:{self.cut.label}"


def cut_entropies(k: int) -> list[Functional]:
    """The built-in family: one entropy per bipartition of k parties."""
    return [Functional("cut", c) for c in all_cuts(k)]


def parse_functional(text: str) -> Functional:
    kind, _, rest = text.partition(":")
    if kind != "cut" or not rest:
        raise ValueError(f"unknown functional {text!r}; expected e.g. 'cut:1,3'")
    try:
        parties = [int(p) for p in rest.split(",")]
    except ValueError:
        raise ValueError(f"bad party list in {text!r}") from None
    return Functional.cut_entropy(parties)


def evaluate(E: Functional, phi: PureState) -> float:
    if E.kind == "cut":
        return schmidt_spectrum(phi, E.cut).entropy()
    raise ValueError(f"no evaluation rule for functional kind {E.kind!r}")


def binary_entropy(p: float) -> float:
    """h(p) in bits, with 0 log 0 = 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"binary entropy needs p in [0, 1], got {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


class CheckResult(NamedTuple):
    passed: bool
    residual: float


@dataclass(frozen=True)
class Ensemble:
    branches: tuple[tuple[float, PureState], ...]

    def __init__(self, branches: Sequence[tuple[float, PureState]]):
        branches = tuple((float(p), s) for p, s in branches)
        if not branches:
            raise ValueError("an ensemble needs at least one branch")
        if any(p < 0 for p, _ in branches):
            raise ValueError("ensemble probabilities must be nonnegative")
        total = math.fsum(p for p, _ in branches)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"ensemble probabilities sum to {total!r}")
        object.__setattr__(self, "branches", branches)


def check_additivity(E: Functional, phi: PureState, psi: PureState, tol: float = 1e-8) -> CheckResult:
    r = abs(evaluate(E, tensor(phi, psi)) - evaluate(E, phi) - evaluate(E, psi))
    return CheckResult(r <= tol, r)


def check_chain_rule(E: Functional, phi: PureState, psi: PureState, p: float, tol: float = 1e-8) -> CheckResult:
    lhs = evaluate(E, direct_sum(phi, psi, p))
    rhs = p * evaluate(E, phi) + (1 - p) * evaluate(E, psi) + binary_entropy(p)
    r = abs(lhs - rhs)
    return CheckResult(r <= tol, r)


def check_monotone_on_average(E: Functional, phi: PureState, ens: Ensemble, tol: float = 1e-9) -> CheckResult:
    """Slack E(phi) - sum_x P(x) E(sigma_x); passes when slack >= -tol.

    Only the inequality is checked; producing ``ens`` by a genuine local
    measurement is the caller's job (see ``states.measure_party``).
    """
    avg = math.fsum(p * evaluate(E, s) for p, s in ens.branches)
    slack = evaluate(E, phi) - avg
    return CheckResult(slack >= -tol, slack)


def _check_delta(delta: float) -> None:
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"continuity estimate needs 0 <= delta < 1, got {delta}")


def continuity_a(delta: float, k: int) -> float:
    """Coefficient of log dim H in the pure-state continuity estimate."""
    _check_delta(delta)
    if delta == 0.0:
        return 0.0
    s = (1 + delta ** (2 / (k + 1))) ** (k + 1)
    return (s - 1 + delta**2) / (1 - delta**2)


def continuity_b(delta: float, k: int) -> float:
    """Dimension-free term of the pure-state continuity estimate."""
    _check_delta(delta)
    if delta == 0.0:
        return 0.0
    base = 1 + delta ** (2 / (k + 1))
    return base ** (k + 1) / (1 - delta**2) * binary_entropy(1 / base)


def continuity_bound(delta: float, k: int, log_dim: float) -> float:
    """a(delta) log dim H + b(delta); infinite once delta reaches 1."""
    if delta >= 1.0:
        return math.inf
    return continuity_a(delta, k) * log_dim + continuity_b(delta, k)


def check_continuity_estimate(E: Functional, phi: PureState, psi: PureState) -> CheckResult:
    """Margin of |E(phi) - E(psi)| <= a(D) log dim H + b(D); ``residual`` is the margin."""
    if phi.dims != psi.dims:
        raise StateError(f"dims mismatch: {phi.dims} vs {psi.dims}")
    D = purified_distance(phi, psi)
    rhs = continuity_bound(D, phi.k, math.log2(phi.total_dim))
    if math.isinf(rhs):
        return CheckResult(True, math.inf)
    margin = rhs - abs(evaluate(E, phi) - evaluate(E, psi))
    return CheckResult(margin >= -1e-9, margin)
