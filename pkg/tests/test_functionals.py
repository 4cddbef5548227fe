import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from locc_rates.functionals import (
    Ensemble,
    Functional,
    binary_entropy,
    check_additivity,
    check_chain_rule,
    check_continuity_estimate,
    check_monotone_on_average,
    continuity_a,
    continuity_b,
    continuity_bound,
    cut_entropies,
    evaluate,
    parse_functional,
)
from locc_rates.states import (
    Cut,
    StateError,
    basis_state,
    direct_sum,
    epr,
    ghz,
    measure_party,
    perturbed_state,
    product_zero,
    random_pure_state,
    schmidt_state,
)
from tests.helpers import eig_entropy, h

EPR = epr()
H_09 = 0.468995593589281  # h(0.9), 30-digit reference
A_01_2 = 0.813715224260554  # a(0.1, 2)
B_01_2 = 1.22250773079216  # b(0.1, 2)


def test_binary_entropy_values():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0 and binary_entropy(1.0) == 0.0
    assert binary_entropy(0.25) == pytest.approx(0.811278, abs=1e-6)
    assert binary_entropy(0.9) == pytest.approx(H_09, abs=1e-14)
    with pytest.raises(ValueError):
        binary_entropy(1.01)


@given(st.floats(0.0, 1.0))
def test_binary_entropy_symmetric(p):
    assert 0.0 <= binary_entropy(p) <= 1.0
    assert binary_entropy(p) == pytest.approx(binary_entropy(1 - p), abs=1e-12)


def test_evaluate_examples():
    E = Functional.cut_entropy([1])
    assert evaluate(E, ghz(2, 3)) == pytest.approx(1.0, abs=1e-12)
    assert evaluate(E, basis_state((2, 2, 2), (0, 0, 0))) == 0.0
    assert evaluate(E, schmidt_state([0.9, 0.1])) == pytest.approx(0.468996, abs=1e-6)
    with pytest.raises(StateError):
        evaluate(Functional.cut_entropy([3]), EPR)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_normalization_on_ghz(k):
    for E in cut_entropies(k):
        assert abs(evaluate(E, ghz(2, k)) - 1.0) <= 1e-12


def test_parse_functional():
    assert parse_functional("cut:1,3") == Functional.cut_entropy([1, 3])
    assert parse_functional("cut:1,3").label == "cut:1,3"
    for bad in ["cut:", "mutual:1", "cut:a"]:
        with pytest.raises(ValueError):
            parse_functional(bad)


def test_additivity_examples(rng):
    E = Functional.cut_entropy([1])
    assert check_additivity(E, EPR, EPR).residual == pytest.approx(0.0, abs=1e-14)
    phi = random_pure_state((2, 3, 2), rng)
    assert check_additivity(Functional.cut_entropy([2]), phi, product_zero(3)).residual <= 1e-12
    with pytest.raises(StateError):
        check_additivity(E, EPR, ghz(2, 3))


def test_chain_rule_examples():
    E = Functional.cut_entropy([1])
    assert evaluate(E, direct_sum(EPR, EPR, 0.5)) == pytest.approx(2.0, abs=1e-12)
    assert check_chain_rule(E, EPR, EPR, 0.5).passed
    s = direct_sum(basis_state((2, 2), (0, 0)), basis_state((2, 2), (1, 1)), 0.3)
    assert evaluate(E, s) == pytest.approx(h(0.3), abs=1e-12)
    s = direct_sum(ghz(2, 3), product_zero(3), 1 / 3)
    assert evaluate(E, s) == pytest.approx(1.25162916738782, abs=1e-12)
    assert check_chain_rule(E, ghz(2, 3), product_zero(3), 1 / 3).residual <= 1e-12


def test_monotone_examples():
    E = Functional.cut_entropy([1])
    z = np.diag([1.0, 0.0])
    ens = Ensemble(measure_party(EPR, 1, [z, np.eye(2) - z]))
    chk = check_monotone_on_average(E, EPR, ens)
    assert chk.passed and chk.residual == pytest.approx(1.0)
    chk = check_monotone_on_average(E, EPR, Ensemble(measure_party(EPR, 1, [np.eye(2)])))
    assert chk.residual == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        Ensemble([(0.5, EPR)])


def test_continuity_coefficients():
    for k in range(2, 7):
        assert continuity_a(0.0, k) == 0.0 and continuity_b(0.0, k) == 0.0
    assert continuity_a(0.1, 2) == pytest.approx(A_01_2, abs=1e-12)
    base = 1 + 0.1 ** (2 / 3)
    assert continuity_b(0.1, 2) == pytest.approx(base**3 / 0.99 * h(1 / base), abs=1e-12)
    assert continuity_b(0.1, 2) == pytest.approx(B_01_2, abs=1e-12)
    with pytest.raises(ValueError):
        continuity_a(1.0, 2)
    assert continuity_bound(1.0, 2, 4.0) == math.inf


@given(st.floats(0.0, 0.99), st.floats(0.0, 0.99), st.integers(2, 6))
def test_continuity_coefficients_monotone(d1, d2, k):
    lo, hi = sorted((d1, d2))
    assert 0.0 <= continuity_a(lo, k) <= continuity_a(hi, k) + 1e-12
    assert 0.0 <= continuity_b(lo, k) <= continuity_b(hi, k) + 1e-12


def test_continuity_estimate_examples(rng):
    E = Functional.cut_entropy([1])
    phi = random_pure_state((4, 4), rng)
    chk = check_continuity_estimate(E, phi, phi)
    assert chk.passed and chk.residual == pytest.approx(0.0, abs=1e-9)
    chk = check_continuity_estimate(E, basis_state((2, 2), (0, 0)), basis_state((2, 2), (1, 1)))
    assert chk.passed and chk.residual == math.inf
    psi = perturbed_state(phi, 0.05, rng)
    assert check_continuity_estimate(E, phi, psi).passed
    with pytest.raises(StateError):
        check_continuity_estimate(E, phi, EPR)


# -- properties ---------------------------------------------------------------

seeds = st.integers(0, 2**32 - 1)


def _random_pair(seed, k):
    r = np.random.default_rng(seed)
    dims = tuple(int(d) for d in r.integers(1, 4, size=k))
    return r, random_pure_state(dims, r), random_pure_state(tuple(int(d) for d in r.integers(1, 4, size=k)), r)


@given(seeds, st.sampled_from([2, 3]))
def test_additivity_random(seed, k):
    _, phi, psi = _random_pair(seed, k)
    for E in cut_entropies(k):
        assert check_additivity(E, phi, psi).residual <= 1e-8


@given(seeds, st.sampled_from([2, 3]), st.floats(0.0, 1.0))
def test_chain_rule_random(seed, k, p):
    _, phi, psi = _random_pair(seed, k)
    for E in cut_entropies(k):
        chk = check_chain_rule(E, phi, psi, p)
        assert chk.residual <= 1e-8
        # superposition lower bound direction
        lhs = evaluate(E, direct_sum(phi, psi, p))
        assert lhs >= p * evaluate(E, phi) + (1 - p) * evaluate(E, psi) + binary_entropy(p) - 1e-9


@given(seeds, st.floats(0.01, 0.99))
def test_flag_measurement_slack_is_h(seed, p):
    _, phi, psi = _random_pair(seed, 3)
    s = direct_sum(phi, psi, p)
    d = s.dims[0] // 2
    flag0 = np.kron(np.eye(d), np.diag([1.0, 0.0]))
    ens = Ensemble(measure_party(s, 1, [flag0, np.eye(2 * d) - flag0]))
    for E in cut_entropies(3):
        chk = check_monotone_on_average(E, s, ens)
        assert chk.passed
        if E.cut.parties == frozenset({1}):
            assert chk.residual == pytest.approx(binary_entropy(p), abs=1e-8)


@given(seeds)
def test_schmidt_basis_measurement_monotone(seed):
    r = np.random.default_rng(seed)
    phi = random_pure_state((3, 3), r)
    u, _, _ = np.linalg.svd(phi.tensor_view())
    projs = [np.outer(u[:, i], u[:, i].conj()) for i in range(3)]
    ens = Ensemble(measure_party(phi, 1, projs))
    chk = check_monotone_on_average(Functional.cut_entropy([1]), phi, ens)
    assert chk.passed
    assert chk.residual == pytest.approx(evaluate(Functional.cut_entropy([1]), phi), abs=1e-8)


@given(seeds, st.sampled_from([(2, 2), (4, 4), (2, 2, 2), (2, 3, 2)]), st.floats(-4, 0.5))
def test_continuity_estimate_random(seed, dims, log_scale):
    r = np.random.default_rng(seed)
    phi = random_pure_state(dims, r)
    psi = perturbed_state(phi, 10.0**log_scale, r)
    for E in cut_entropies(len(dims)):
        assert check_continuity_estimate(E, phi, psi).residual >= -1e-9


@given(seeds)
def test_evaluate_matches_eigenvalue_oracle(seed):
    r = np.random.default_rng(seed)
    phi = random_pure_state((2, 3, 2), r)
    for E in cut_entropies(3):
        assert evaluate(E, phi) == pytest.approx(eig_entropy(phi, E.cut.parties), abs=1e-9)


def test_cut_representative_is_smaller_side():
    sides = [E.cut.parties for E in cut_entropies(4)]
    assert len(sides) == 7
    assert all(len(c) == 1 or (len(c) == 2 and 1 in c) for c in sides)
    assert Cut([1]).complement(3).parties == frozenset({2, 3})
