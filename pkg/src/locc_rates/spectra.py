"""Grouped Schmidt spectra with log-domain weights and exact multiplicities.

A spectrum of a tensor power has exponentially many eigenvalues but only
polynomially many distinct ones, so we keep (weight, multiplicity) pairs.
Weights live as base-2 logarithms to survive powers in the thousands;
multiplicities are Python ints.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate, combinations_with_replacement
from typing import Iterable, Sequence

import numpy as np

from .states import Cut, PureState, schmidt_coefficients

GROUP_TOL = 1e-9
MASS_TOL = 1e-9
# eigenvalues at or below this are treated as exact zeros
ZERO_CUTOFF = 1e-14


class SpectrumError(ValueError):
    pass


def log2_int(n: int) -> float:
    """log2 of a (possibly huge) positive integer."""
    return math.log2(n)


def log2_sum(values: Iterable[float]) -> float:
    """log2(sum 2**v) without overflow."""
    values = list(values)
    if not values:
        return -math.inf
    top = max(values)
    if top == -math.inf:
        return top
    return top + math.log2(math.fsum(2.0 ** (v - top) for v in values))


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Distinct eigenvalues (as log2 weights, strictly decreasing) with multiplicities."""

    log_weights: tuple[float, ...]
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        lw = tuple(float(x) for x in self.log_weights)
        mult = tuple(int(m) for m in self.multiplicities)
        if len(lw) != len(mult) or not lw:
            raise SpectrumError("spectrum needs matching, nonempty weight and multiplicity lists")
        if any(m < 1 for m in mult):
            raise SpectrumError("multiplicities must be >= 1")
        if any(x > 1e-12 for x in lw):
            raise SpectrumError("weights must lie in (0, 1]")
        if any(b >= a for a, b in zip(lw, lw[1:])):
            raise SpectrumError("weights must be strictly decreasing")
        mass = self._mass(lw, mult)
        if abs(mass - 1.0) > MASS_TOL:
            raise SpectrumError(f"spectrum mass is {mass!r}, not 1")
        object.__setattr__(self, "log_weights", lw)
        object.__setattr__(self, "multiplicities", mult)

    @staticmethod
    def _mass(lw, mult) -> float:
        return 2.0 ** log2_sum(w + log2_int(m) for w, m in zip(lw, mult))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, int]]) -> "SchmidtSpectrum":
        """Build from (weight, multiplicity) pairs, merging near-equal weights."""
        return _merge((math.log2(w), int(m)) for w, m in pairs if m > 0 and w > 0)

    @classmethod
    def from_eigenvalues(cls, values: Sequence[float]) -> "SchmidtSpectrum":
        vals = sorted((float(v) for v in values if v > ZERO_CUTOFF), reverse=True)
        groups: list[list[float]] = []
        for v in vals:
            if groups and groups[-1][0] - v <= GROUP_TOL:
                groups[-1].append(v)
            else:
                groups.append([v])
        # mean weight keeps the group's mass; renormalize away dropped noise
        mass = math.fsum(vals)
        return cls(
            tuple(math.log2(math.fsum(g) / len(g) / mass) for g in groups),
            tuple(len(g) for g in groups),
        )

    @classmethod
    def uniform(cls, size: int) -> "SchmidtSpectrum":
        return cls((-log2_int(size),), (int(size),))

    @property
    def entries(self) -> list[tuple[float, int]]:
        return [(2.0**w, m) for w, m in zip(self.log_weights, self.multiplicities)]

    @property
    def rank(self) -> int:
        return sum(self.multiplicities)

    @property
    def mass(self) -> float:
        return self._mass(self.log_weights, self.multiplicities)

    def group_masses(self) -> list[float]:
        return [2.0 ** (w + log2_int(m)) for w, m in zip(self.log_weights, self.multiplicities)]

    def entropy(self) -> float:
        """Shannon entropy (bits) of the eigenvalue distribution."""
        return math.fsum(-q * w for q, w in zip(self.group_masses(), self.log_weights))

    def scaled(self, log_factor: float, mult_factor: int) -> "SchmidtSpectrum":
        """Spectrum of this state tensored with a uniform state of rank ``mult_factor``."""
        return SchmidtSpectrum(
            tuple(w + log_factor for w in self.log_weights),
            tuple(m * mult_factor for m in self.multiplicities),
        )

    def __len__(self) -> int:
        return len(self.log_weights)


def _merge(items: Iterable[tuple[float, int]]) -> SchmidtSpectrum:
    items = sorted(items, key=lambda t: -t[0])
    lw: list[float] = []
    mult: list[int] = []
    for w, m in items:
        if lw and _close(lw[-1], w):
            mult[-1] += m
        else:
            lw.append(w)
            mult.append(m)
    return SchmidtSpectrum(tuple(lw), tuple(mult))


def _close(a: float, b: float) -> bool:
    # log-domain weights: compare relatively so tiny tensor-power weights still group
    return abs(a - b) <= GROUP_TOL


def schmidt_spectrum(phi: PureState, cut: Cut) -> SchmidtSpectrum:
    """Grouped eigenvalues of the reduced state of ``phi`` on ``cut``."""
    return SchmidtSpectrum.from_eigenvalues(schmidt_coefficients(phi, cut))


def combine(a: SchmidtSpectrum, b: SchmidtSpectrum) -> SchmidtSpectrum:
    """Spectrum of the tensor product: pairwise products, equal weights merged."""
    return _merge(
        (wa + wb, ma * mb)
        for wa, ma in zip(a.log_weights, a.multiplicities)
        for wb, mb in zip(b.log_weights, b.multiplicities)
    )


def _multinomial(n: int, counts: Sequence[int]) -> int:
    out, left = 1, n
    for c in counts:
        out *= math.comb(left, c)
        left -= c
    return out


def spectrum_power(s: SchmidtSpectrum, n: int) -> SchmidtSpectrum:
    """Grouped spectrum of the n-th tensor power, enumerated by type class.

    A type (n_1, ..., n_r) with sum n contributes weight prod w_i**n_i with
    multiplicity multinomial(n; n_i) * prod c_i**n_i.
    """
    if n < 1:
        raise SpectrumError("spectrum_power needs n >= 1")
    r = len(s)
    lw, mult = s.log_weights, s.multiplicities
    if r == 1:
        return SchmidtSpectrum((n * lw[0],), (mult[0] ** n,))
    if r == 2:
        return _merge(_type_entry(lw, mult, n, (j, n - j)) for j in range(n + 1))
    items = []
    for combo in combinations_with_replacement(range(r), n):
        counts = [0] * r
        for i in combo:
            counts[i] += 1
        items.append(_type_entry(lw, mult, n, counts))
    return _merge(items)


def _type_entry(lw, mult, n, counts):
    logw = math.fsum(c * w for c, w in zip(counts, lw))
    m = _multinomial(n, counts)
    for c, mi in zip(counts, mult):
        if mi != 1:
            m *= mi**c
    return logw, m


# -- cumulative views used by the order oracles -----------------------------


class Cumulative:
    """Partial sums and tails of a spectrum at arbitrary (big-integer) atom counts."""

    def __init__(self, s: SchmidtSpectrum):
        self.spectrum = s
        self.lw = s.log_weights
        self.ends: list[int] = []
        total = 0
        for m in s.multiplicities:
            total += m
            self.ends.append(total)
        self.starts = [0] + self.ends[:-1]
        masses = s.group_masses()
        scale = math.fsum(masses)
        masses = [q / scale for q in masses]
        self.prefix = [0.0, *accumulate(masses)]
        # tails summed from the light end so small tails keep full precision
        self.suffix = [*accumulate(reversed(masses))][::-1] + [0.0]
        self.log_scale = math.log2(scale)

    @property
    def size(self) -> int:
        return self.ends[-1]

    def _atoms(self, count: int, i: int) -> float:
        if count <= 0:
            return 0.0
        return 2.0 ** (log2_int(count) + self.lw[i] - self.log_scale)

    def partial(self, K: int) -> float:
        """Mass of the K heaviest atoms."""
        if K <= 0:
            return 0.0
        if K >= self.size:
            return 1.0
        i = bisect_right(self.ends, K)
        return self.prefix[i] + self._atoms(K - self.starts[i], i)

    def tail(self, K: int) -> float:
        """Mass of all atoms after the K heaviest."""
        if K <= 0:
            return 1.0
        if K >= self.size:
            return 0.0
        i = bisect_right(self.ends, K)
        return self._atoms(self.ends[i] - K, i) + self.suffix[i + 1]


def truncate_spectrum(s: SchmidtSpectrum, eps: float) -> SchmidtSpectrum:
    """Keep the fewest heaviest atoms holding mass >= 1 - eps**2, then renormalize.

    The truncated pure state has fidelity >= sqrt(1 - eps**2) with the
    original, so it lies within purified distance eps.
    """
    if not 0.0 <= eps < 1.0:
        raise SpectrumError(f"truncation needs 0 <= eps < 1, got {eps}")
    if eps == 0.0:
        return s
    thr = 1.0 - eps * eps
    cum = Cumulative(s)
    for i in range(len(s)):
        if cum.prefix[i + 1] >= thr:
            break
    else:
        return s
    before = cum.prefix[i]
    j = _atoms_needed(thr - before, s.log_weights[i] - cum.log_scale, s.multiplicities[i])
    if j < 2**53:
        while j > 1 and before + cum._atoms(j - 1, i) >= thr:
            j -= 1
        while j < s.multiplicities[i] and before + cum._atoms(j, i) < thr:
            j += 1
    lw = list(s.log_weights[:i]) + [s.log_weights[i]]
    mult = list(s.multiplicities[:i]) + [j]
    kept = log2_sum(w + log2_int(m) for w, m in zip(lw, mult))
    return SchmidtSpectrum(tuple(w - kept for w in lw), tuple(mult))


def _atoms_needed(need: float, logw: float, cap: int) -> int:
    """Smallest j (never an underestimate) with j * 2**logw >= need, capped at ``cap``."""
    if need <= 0:
        return 1
    lj = math.log2(need) - logw
    if lj < 52:
        j = max(1, math.ceil(2.0**lj))
    else:
        # float mantissa is exact to 2**-52; round up with a relative safety margin
        shift = math.floor(lj) - 52
        j = (math.ceil(2.0 ** (lj - shift)) + 2) << shift
    return min(j, cap)


def spectrum_array(s: SchmidtSpectrum) -> np.ndarray:
    """Dense eigenvalue array (only for small ranks)."""
    if s.rank > 2**20:
        raise SpectrumError("spectrum too large to expand")
    return np.repeat([w for w, _ in s.entries], s.multiplicities)
