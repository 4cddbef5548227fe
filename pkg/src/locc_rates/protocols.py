"""Executable versions of the concentration and continuity constructions.

Binomial sums are done with exact integer binomials and log-domain
probabilities, accumulated with ``math.fsum`` so results do not depend on
summation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .functionals import binary_entropy, evaluate
from .states import PureState, StateError, direct_sum, purified_distance


@dataclass(frozen=True)
class BinomialBranch:
    m: int
    probability: float
    ghz_rank: int


def _binomial_row(n: int) -> list[int]:
    """Exact C(n, 0..n) by the multiplicative recurrence."""
    row = [1]
    for m in range(n):
        row.append(row[-1] * (n - m) // (m + 1))
    return row


def _log2_binom_pmf(n: int, m: int, p: float, comb: int) -> float:
    if (p == 0.0 and m > 0) or (p == 1.0 and m < n):
        return -math.inf
    lp = m * math.log2(p) if m else 0.0
    lq = (n - m) * math.log2(1 - p) if n - m else 0.0
    return math.log2(comb) + lp + lq


def _check_np(n: int, p: float) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")


def binomial_decomposition(n: int, p: float) -> list[BinomialBranch]:
    """Branches of (sqrt p phi + sqrt(1-p) psi)^(x)n: outcome m carries a GHZ of rank C(n, m)."""
    _check_np(n, p)
    return [
        BinomialBranch(m, 2.0 ** _log2_binom_pmf(n, m, p, c), c)
        for m, c in enumerate(_binomial_row(n))
    ]


def expected_log_ghz(n: int, p: float) -> float:
    """(1/n) E_m[log2 C(n, m)] for m ~ Binomial(n, p)."""
    _check_np(n, p)
    return math.fsum(b.probability * math.log2(b.ghz_rank) for b in binomial_decomposition(n, p)) / n


def concentration_yield(n: int, p: float) -> float:
    """EPR pairs per copy when outcome m is converted to floor(log2 C(n, m)) pairs."""
    _check_np(n, p)
    return math.fsum(b.probability * (b.ghz_rank.bit_length() - 1) for b in binomial_decomposition(n, p)) / n


class SimulationResult(NamedTuple):
    yields: np.ndarray
    mean: float
    std_error: float


def concentration_simulate(n: int, p: float, shots: int, seed: int) -> SimulationResult:
    """Sample the type-class measurement ``shots`` times and record yield per copy."""
    _check_np(n, p)
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(seed)
    ms = rng.binomial(n, p, size=shots)
    table = np.array([c.bit_length() - 1 for c in _binomial_row(n)], dtype=float)
    yields = table[ms] / n
    se = float(yields.std(ddof=1) / math.sqrt(shots)) if shots > 1 else 0.0
    return SimulationResult(yields, float(yields.mean()), se)


class LogBinomialBounds(NamedTuple):
    lower: float
    exact: float
    upper: float


def log_binomial_bounds(n: int, m: int) -> LogBinomialBounds:
    """n h(m/n) - 2 log2(n+1) <= log2 C(n, m) <= n h(m/n)."""
    if n < 1 or not 0 <= m <= n:
        raise ValueError(f"need n >= 1 and 0 <= m <= n, got n={n}, m={m}")
    upper = n * binary_entropy(m / n)
    return LogBinomialBounds(upper - 2 * math.log2(n + 1), math.log2(math.comb(n, m)), upper)


# -- continuity construction -------------------------------------------------


class DegeneratePairError(StateError):
    pass


@dataclass(frozen=True)
class ContinuityConstruction:
    A: complex
    B: complex
    q: float
    lam: float
    omega: PureState
    u: float
    k: int
    overlap: complex

    def unit_residual(self) -> float:
        """| |A|^2 + |B|^2 + 2 Re(conj(A) B <phi|psi>) - 1 |."""
        val = abs(self.A) ** 2 + abs(self.B) ** 2 + 2 * (self.A.conjugate() * self.B * self.overlap).real
        return abs(val - 1.0)

    def cancel_residual(self) -> float:
        target = -math.sqrt(self.q / (1 - self.q) * (self.lam / (1 - self.lam)) ** self.k)
        return abs(self.A - target)

    @property
    def success_weight(self) -> float:
        """|B|^2 (1-q)(1-lambda)^k, the norm squared of the projected vector."""
        return abs(self.B) ** 2 * (1 - self.q) * (1 - self.lam) ** self.k


def continuity_u_closed_form(D: float, k: int) -> float:
    return (1 - D * D) / (1 + D ** (2 / (k + 1))) ** (k + 1)


def continuity_construction(phi: PureState, psi: PureState) -> ContinuityConstruction:
    """Parameters making a flag-qubit projection of sqrt(q) phi + sqrt(1-q) omega land on psi."""
    if phi.dims != psi.dims:
        raise StateError(f"dims mismatch: {phi.dims} vs {psi.dims}")
    ov = phi.overlap(psi)
    F2 = min(1.0, abs(ov) ** 2)
    D = purified_distance(phi, psi)
    if D <= 0.0 or D >= 1.0 or F2 <= 0.0:
        raise DegeneratePairError(f"continuity construction needs 0 < D < 1, got D = {D}")
    k = phi.k
    # A phi + B psi cancels to O(1) from O(1/D) terms; build it from the
    # part of psi orthogonal to phi instead: omega = conj(<phi|psi>) e - s phi
    perp = psi.amps - ov * phi.amps
    s = float(np.linalg.norm(perp))
    A = complex(-1 / s)
    B = ov.conjugate() / s
    q = 1 / (1 + (s * s) ** (1 / (k + 1)))
    w = ov.conjugate() * (perp / s) - s * phi.amps
    omega = PureState(phi.dims, w / np.linalg.norm(w))
    c = ContinuityConstruction(A, B, q, q, omega, 0.0, k, ov)
    return ContinuityConstruction(A, B, q, q, omega, min(q, c.success_weight), k, ov)


def project_flags(state: PureState, base_dims: tuple[int, ...], lam: float) -> np.ndarray:
    """Contract every party's flag qubit with sqrt(lam)<0| + sqrt(1-lam)<1|."""
    k = len(base_dims)
    t = state.amps.reshape([x for d in base_dims for x in (d, 2)])
    bra = np.array([math.sqrt(lam), math.sqrt(1 - lam)])
    for j in reversed(range(k)):
        t = np.tensordot(t, bra, axes=([2 * j + 1], [0]))
    return t.reshape(-1)


class ProtocolCheck(NamedTuple):
    passed: bool
    residual: float
    success_weight: float


def continuity_protocol_check(c: ContinuityConstruction, phi: PureState, psi: PureState, tol: float = 1e-9) -> ProtocolCheck:
    """Build sqrt(q) phi (+) sqrt(1-q) omega, project the flags, compare with B sqrt(...) psi."""
    state = direct_sum(phi, c.omega, c.q)
    projected = project_flags(state, phi.dims, c.lam)
    expected = c.B * math.sqrt((1 - c.q) * (1 - c.lam) ** c.k) * psi.amps
    residual = float(np.linalg.norm(projected - expected))
    norm2 = float(np.vdot(projected, projected).real)
    residual = max(residual, abs(norm2 - c.success_weight))
    return ProtocolCheck(residual <= tol, residual, norm2)


def projection_monotone_slack(c: ContinuityConstruction, phi: PureState, psi: PureState, E) -> float:
    """q E(phi) + (1-q) E(omega) + h(q) - u E(psi); nonnegative for a chain-rule functional."""
    return c.q * evaluate(E, phi) + (1 - c.q) * evaluate(E, c.omega) + binary_entropy(c.q) - c.u * evaluate(E, psi)
