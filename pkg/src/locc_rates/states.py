"""Multipartite pure and mixed states on dense amplitude tensors.

Party indices are 1-based everywhere in the public API, matching the way
cuts are written on the command line (``cut:1,3``).  A state on ``k``
parties with local dimensions ``(d_1, ..., d_k)`` stores its amplitudes
as a flat vector in row-major (mixed-radix) order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence, Union

import numpy as np

MAX_TOTAL_DIM = 2**20

NORM_TOL = 1e-10
DENSITY_TOL = 1e-10


class StateError(ValueError):
    """Invalid state data or incompatible states."""


class StateTooLargeError(StateError):
    pass


def check_dims(dims: Iterable[int]) -> tuple[int, ...]:
    """Validate local dimensions and return them as a tuple.

    The total dimension is computed with Python integers so an oversized
    request is reported instead of wrapping around.
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) < 1:
        raise StateError("a state needs at least one party")
    if any(d < 1 for d in dims):
        raise StateError(f"local dimensions must be positive, got {dims}")
    total = math.prod(dims)
    if total > MAX_TOTAL_DIM:
        raise StateTooLargeError(
            f"total dimension {total} exceeds the dense cap {MAX_TOTAL_DIM}"
        )
    return dims


@dataclass(frozen=True)
class Cut:
    """A bipartition, given by the parties on one side (1-based)."""

    parties: frozenset[int]

    def __init__(self, parties: Iterable[int]):
        object.__setattr__(self, "parties", frozenset(int(p) for p in parties))
        if not self.parties:
            raise StateError("a cut needs at least one party")

    def validate(self, k: int) -> None:
        if any(p < 1 or p > k for p in self.parties):
            raise StateError(f"cut {self.label} refers to parties outside 1..{k}")
        if len(self.parties) >= k:
            raise StateError(f"cut {self.label} must leave at least one party out (k={k})")

    def complement(self, k: int) -> "Cut":
        return Cut(set(range(1, k + 1)) - self.parties)

    @property
    def label(self) -> str:
        return ",".join(str(p) for p in sorted(self.parties))

    def __repr__(self) -> str:
        return f"Cut({{{self.label}}})"


def all_cuts(k: int) -> list[Cut]:
    """One representative per bipartition of ``k`` parties (2**(k-1) - 1 cuts).

    The smaller side is used; for even splits the side holding party 1.
    """
    cuts = []
    for size in range(1, k // 2 + 1):
        for combo in combinations(range(1, k + 1), size):
            if 2 * size == k and 1 not in combo:
                continue
            cuts.append(Cut(combo))
    return cuts


@dataclass(frozen=True, eq=False)
class PureState:
    dims: tuple[int, ...]
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = check_dims(self.dims)
        amps = np.array(self.amps, dtype=complex).reshape(-1)
        if amps.size != math.prod(dims):
            raise StateError(
                f"expected {math.prod(dims)} amplitudes for dims {dims}, got {amps.size}"
            )
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise StateError(f"state vector is not normalized (|psi|^2 = {norm2!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @property
    def k(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def tensor_view(self) -> np.ndarray:
        return self.amps.reshape(self.dims)

    def density(self) -> "MixedState":
        return MixedState(self.dims, np.outer(self.amps, self.amps.conj()))

    def overlap(self, other: "PureState") -> complex:
        """<self|other>."""
        if self.total_dim != other.total_dim:
            raise StateError("overlap needs states of equal total dimension")
        return complex(np.vdot(self.amps, other.amps))

    def __repr__(self) -> str:
        return f"PureState(dims={self.dims})"


@dataclass(frozen=True, eq=False)
class MixedState:
    dims: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = check_dims(self.dims)
        mat = np.array(self.matrix, dtype=complex)
        n = math.prod(dims)
        if mat.shape != (n, n):
            raise StateError(f"density matrix must be {n}x{n}, got {mat.shape}")
        if not np.allclose(mat, mat.conj().T, atol=DENSITY_TOL, rtol=0):
            raise StateError("density matrix is not Hermitian")
        tr = float(np.trace(mat).real)
        if abs(tr - 1.0) > DENSITY_TOL:
            raise StateError(f"density matrix has trace {tr!r}")
        if np.linalg.eigvalsh(mat).min() < -DENSITY_TOL:
            raise StateError("density matrix has a negative eigenvalue")
        mat.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", mat)

    @property
    def k(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.dims)

    def __repr__(self) -> str:
        return f"MixedState(dims={self.dims})"


State = Union[PureState, MixedState]


# -- constructors -------------------------------------------------------------


def basis_state(dims: Sequence[int], index: Sequence[int]) -> PureState:
    dims = check_dims(dims)
    amps = np.zeros(math.prod(dims), dtype=complex)
    amps[np.ravel_multi_index(tuple(index), dims)] = 1.0
    return PureState(dims, amps)


def product_zero(k: int) -> PureState:
    """|0...0> on k qubit-free parties (local dimension 1)."""
    return basis_state((1,) * k, (0,) * k)


def ghz(r: int, k: int) -> PureState:
    """Generalized GHZ state (1/sqrt r) sum_i |i...i>."""
    if r < 1 or k < 1:
        raise StateError("ghz needs r >= 1 and k >= 1")
    dims = check_dims((r,) * k)
    amps = np.zeros(math.prod(dims), dtype=complex)
    stride = sum(r**j for j in range(k))
    amps[np.arange(r) * stride] = 1 / math.sqrt(r)
    return PureState(dims, amps)


def schmidt_state(coefficients: Sequence[float]) -> PureState:
    """Bipartite sum_i sqrt(c_i)|ii> for squared Schmidt coefficients c_i."""
    c = np.asarray(coefficients, dtype=float)
    if c.ndim != 1 or c.size == 0 or (c < 0).any():
        raise StateError("Schmidt coefficients must be a nonempty list of nonnegative numbers")
    d = c.size
    amps = np.zeros(d * d, dtype=complex)
    amps[np.arange(d) * (d + 1)] = np.sqrt(c)
    return PureState((d, d), amps)


def epr(k: int = 2, pair: tuple[int, int] = (1, 2)) -> PureState:
    """EPR pair between two parties of a k-party system, the rest in |0>."""
    a, b = pair
    if a == b or not (1 <= a <= k and 1 <= b <= k):
        raise StateError(f"invalid EPR pair {pair} for k={k}")
    dims = tuple(2 if j in (a, b) else 1 for j in range(1, k + 1))
    amps = np.zeros(math.prod(dims), dtype=complex)
    amps[0] = amps[-1] = 1 / math.sqrt(2)
    return PureState(dims, amps)


def random_pure_state(dims: Sequence[int], rng: np.random.Generator) -> PureState:
    """Haar-random pure state."""
    dims = check_dims(dims)
    n = math.prod(dims)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState(dims, v / np.linalg.norm(v))


def perturbed_state(phi: PureState, scale: float, rng: np.random.Generator) -> PureState:
    """phi plus complex Gaussian noise of relative size ``scale``, renormalized."""
    n = phi.total_dim
    noise = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2 * n)
    v = phi.amps + scale * noise
    return PureState(phi.dims, v / np.linalg.norm(v))


def random_mixed_state(dims: Sequence[int], rng: np.random.Generator, rank: int | None = None) -> MixedState:
    """Random density matrix W W^dagger / Tr from a complex Ginibre matrix."""
    dims = check_dims(dims)
    n = math.prod(dims)
    rank = n if rank is None else rank
    w = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = w @ w.conj().T
    rho = (rho + rho.conj().T) / 2
    return MixedState(dims, rho / np.trace(rho).real)


# -- algebra -----------------------------------------------------------------


def _interleave(k: int) -> list[int]:
    # axes (a_1..a_k, b_1..b_k) -> (a_1, b_1, ..., a_k, b_k)
    return [ax for j in range(k) for ax in (j, k + j)]


def tensor(a: PureState, b: PureState) -> PureState:
    """Party-wise tensor product; party j of the result holds a_j (x) b_j."""
    if a.k != b.k:
        raise StateError(f"party count mismatch: {a.k} vs {b.k}")
    dims = check_dims(da * db for da, db in zip(a.dims, b.dims))
    t = np.multiply.outer(a.tensor_view(), b.tensor_view())
    t = t.transpose(_interleave(a.k))
    return PureState(dims, t.reshape(-1))


def tensor_power(a: PureState, n: int) -> PureState:
    if n < 1:
        raise StateError("tensor power needs n >= 1")
    out = a
    for _ in range(n - 1):
        out = tensor(out, a)
    return out


def tensor_mixed(a: MixedState, b: MixedState) -> MixedState:
    """Party-wise tensor product of density matrices."""
    if a.k != b.k:
        raise StateError(f"party count mismatch: {a.k} vs {b.k}")
    k = a.k
    dims = check_dims(da * db for da, db in zip(a.dims, b.dims))
    t = np.multiply.outer(a.matrix.reshape(a.dims * 2), b.matrix.reshape(b.dims * 2))
    # axes: a_row(k) a_col(k) b_row(k) b_col(k)
    rows = [ax for j in range(k) for ax in (j, 2 * k + j)]
    cols = [ax for j in range(k) for ax in (k + j, 3 * k + j)]
    n = math.prod(dims)
    return MixedState(dims, t.transpose(rows + cols).reshape(n, n))


def pad(a: PureState, dims: Sequence[int]) -> PureState:
    """Embed into larger local spaces by zero padding."""
    dims = check_dims(dims)
    if len(dims) != a.k or any(d < da for d, da in zip(dims, a.dims)):
        raise StateError(f"cannot pad dims {a.dims} into {dims}")
    t = np.zeros(dims, dtype=complex)
    t[tuple(slice(0, da) for da in a.dims)] = a.tensor_view()
    return PureState(dims, t.reshape(-1))


def direct_sum(a: PureState, b: PureState, p: float) -> PureState:
    """sqrt(p) a (x) |0...0> + sqrt(1-p) b (x) |1...1>, one flag qubit per party.

    Both states are first zero-padded to common local dimensions.  The
    flag qubit is the least significant factor of each party's space.
    """
    if a.k != b.k:
        raise StateError(f"party count mismatch: {a.k} vs {b.k}")
    if not 0.0 <= p <= 1.0:
        raise StateError(f"mixing weight p={p} outside [0, 1]")
    common = tuple(max(x, y) for x, y in zip(a.dims, b.dims))
    a, b = pad(a, common), pad(b, common)
    zeros = basis_state((2,) * a.k, (0,) * a.k)
    ones = basis_state((2,) * a.k, (1,) * a.k)
    amps = math.sqrt(p) * tensor(a, zeros).amps + math.sqrt(1 - p) * tensor(b, ones).amps
    return PureState(tuple(2 * d for d in common), amps)


# -- distances ---------------------------------------------------------------


def _as_mixed(s: State) -> MixedState:
    return s.density() if isinstance(s, PureState) else s


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def fidelity(rho: State, sigma: State) -> float:
    """F = Tr sqrt(sigma^1/2 rho sigma^1/2); |<phi|psi>| for two pure states."""
    if rho.total_dim != sigma.total_dim:
        raise StateError(f"dimension mismatch: {rho.total_dim} vs {sigma.total_dim}")
    if isinstance(rho, PureState) and isinstance(sigma, PureState):
        return min(1.0, abs(rho.overlap(sigma)))
    # nuclear norm of sqrt(rho) sqrt(sigma); symmetric and steadier than sqrt of a product
    r, s = _as_mixed(rho).matrix, _as_mixed(sigma).matrix
    sv = np.linalg.svd(_psd_sqrt(r) @ _psd_sqrt(s), compute_uv=False)
    return float(min(1.0, sv.sum()))


def purified_distance(rho: State, sigma: State) -> float:
    f = fidelity(rho, sigma)
    return math.sqrt(max(0.0, 1.0 - f * f))


# -- reductions --------------------------------------------------------------


def _bipartite_matrix(phi: PureState, cut: Cut) -> np.ndarray:
    cut.validate(phi.k)
    keep = sorted(p - 1 for p in cut.parties)
    rest = [j for j in range(phi.k) if j not in keep]
    t = phi.tensor_view().transpose(keep + rest)
    dk = math.prod(phi.dims[j] for j in keep)
    return t.reshape(dk, -1)


def reduced_state(phi: PureState, cut: Cut) -> MixedState:
    """Marginal on the parties of ``cut`` (the complement is traced out)."""
    m = _bipartite_matrix(phi, cut)
    dims = tuple(phi.dims[p - 1] for p in sorted(cut.parties))
    rho = m @ m.conj().T
    return MixedState(dims, (rho + rho.conj().T) / 2)


def partial_trace(rho: MixedState, cut: Cut) -> MixedState:
    """Keep the parties of ``cut``, trace out the rest."""
    cut.validate(rho.k)
    k = rho.k
    keep = sorted(p - 1 for p in cut.parties)
    rest = [j for j in range(k) if j not in keep]
    t = rho.matrix.reshape(rho.dims * 2)
    t = t.transpose(keep + rest + [k + j for j in keep] + [k + j for j in rest])
    dk = math.prod(rho.dims[j] for j in keep)
    dr = math.prod(rho.dims[j] for j in rest)
    t = t.reshape(dk, dr, dk, dr)
    out = np.einsum("ajbj->ab", t)
    return MixedState(tuple(rho.dims[j] for j in keep), (out + out.conj().T) / 2)


def schmidt_coefficients(phi: PureState, cut: Cut) -> np.ndarray:
    """Squared singular values across the cut, descending (zeros included)."""
    s = np.linalg.svd(_bipartite_matrix(phi, cut), compute_uv=False)
    return s * s


def measure_party(phi: PureState, party: int, projectors: Sequence[np.ndarray]) -> list[tuple[float, PureState]]:
    """Apply a local projective measurement and return (probability, post-state) branches.

    Zero-probability outcomes are dropped.  ``projectors`` act on the local
    space of ``party`` and must sum to the identity.
    """
    if not 1 <= party <= phi.k:
        raise StateError(f"party {party} outside 1..{phi.k}")
    d = phi.dims[party - 1]
    total = sum(np.asarray(p, dtype=complex) for p in projectors)
    if not np.allclose(total, np.eye(d), atol=1e-10):
        raise StateError("projectors do not resolve the identity")
    t = phi.tensor_view()
    branches = []
    for proj in projectors:
        out = np.moveaxis(np.tensordot(proj, t, axes=([1], [party - 1])), 0, party - 1)
        v = out.reshape(-1)
        prob = float(np.vdot(v, v).real)
        if prob > 1e-14:
            branches.append((prob, PureState(phi.dims, v / math.sqrt(prob))))
    return branches
