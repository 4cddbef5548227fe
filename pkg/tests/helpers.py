"""Independent reference computations used as test oracles."""

import math

import numpy as np

from locc_rates.states import Cut, PureState, reduced_state


def eig_entropy(phi: PureState, parties) -> float:
    """Cut entropy by explicit partial trace and Hermitian eigensolver (no SVD, no grouping)."""
    ev = np.linalg.eigvalsh(reduced_state(phi, Cut(parties)).matrix)
    ev = ev[ev > 1e-15]
    return float(-(ev * np.log2(ev)).sum())


def h(p):
    return 0.0 if p in (0, 1) else -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def flat(entries):
    """(weight, multiplicity) pairs as one flat list, for pytest.approx."""
    return [v for pair in entries for v in pair]
