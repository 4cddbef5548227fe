"""Rate bounds from the cut-entropy family.

For k = 2 the entropy ratio is the exact asymptotic rate between entangled
pure states.  For k >= 3 the minimum over cut entropies only bounds the
rate from above: the true rate is an infimum over a larger family of
functionals that is not known explicitly.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

from .functionals import Functional, cut_entropies, evaluate
from .states import PureState, StateError

ZERO_TOL = 1e-12


class RateKind(str, enum.Enum):
    EXACT = "exact"
    UPPER_BOUND = "upper_bound"
    LOWER_BOUND = "lower_bound"


class SeparableTargetError(StateError):
    """Every functional in the family vanishes on the target state."""


class DegenerateStateError(StateError):
    pass


@dataclass(frozen=True)
class RateEstimate:
    value: float
    kind: RateKind
    certificate: str

    def to_dict(self) -> dict:
        return {"value": self.value, "kind": self.kind.value, "certificate": self.certificate}


def family_values(phi: PureState) -> dict[Functional, float]:
    family = cut_entropies(phi.k)
    if len(family) < 8:
        values = [evaluate(E, phi) for E in family]
    else:
        with ThreadPoolExecutor() as pool:
            values = list(pool.map(lambda E: evaluate(E, phi), family))
    return dict(zip(family, values))


def rate_upper_bound(phi: PureState, psi: PureState) -> RateEstimate:
    """min over cut entropies E with E(psi) > 0 of E(phi) / E(psi)."""
    if phi.k != psi.k:
        raise StateError(f"party count mismatch: {phi.k} vs {psi.k}")
    src, tgt = family_values(phi), family_values(psi)
    ratios = {E: src[E] / tgt[E] for E in tgt if tgt[E] > ZERO_TOL}
    if not ratios:
        raise SeparableTargetError("target is separable across every cut; the rate is not defined")
    best = min(ratios, key=lambda E: (ratios[E], E.label))
    exact = phi.k == 2 and src[best] > ZERO_TOL
    return RateEstimate(
        ratios[best],
        RateKind.EXACT if exact else RateKind.UPPER_BOUND,
        f"{best.label}: {src[best]:.12g} / {tgt[best]:.12g}",
    )


def bipartite_pure_rate(phi: PureState, psi: PureState) -> RateEstimate:
    """Exact rate between bipartite entangled pure states: ratio of entanglement entropies."""
    if phi.k != 2 or psi.k != 2:
        raise StateError("bipartite_pure_rate needs two-party states")
    E = cut_entropies(2)[0]
    num, den = evaluate(E, phi), evaluate(E, psi)
    if den <= ZERO_TOL:
        raise SeparableTargetError("target state is a product state")
    if num <= ZERO_TOL:
        raise DegenerateStateError("source state is a product state")
    return RateEstimate(num / den, RateKind.EXACT, f"{E.label}: {num:.12g} / {den:.12g}")


class GhzRateBounds(NamedTuple):
    distill_upper: float
    cost_lower: float


def ghz_rate_bounds(phi: PureState) -> GhzRateBounds:
    """Family bounds on GHZ distillation rate (min cut entropy) and GHZ cost (max)."""
    if phi.k < 2:
        raise StateError("GHZ rate bounds need k >= 2")
    values = family_values(phi).values()
    return GhzRateBounds(min(values), max(values))


def family_separates(phi: PureState, psi: PureState, tol: float = 1e-9) -> bool:
    """Whether some cut entropy distinguishes the two states."""
    a, b = family_values(phi), family_values(psi)
    return any(abs(a[E] - b[E]) > tol for E in a)

