from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locc_rates.monoid import (
    BipartitePureMonoid,
    OracleError,
    ToyMonoid,
    achievable_rate_lower_bound,
    conversion_probability,
    generator_budget,
    majorization_geq,
    monoid_of_bipartite_pure,
)
from locc_rates.rates import rate_upper_bound
from locc_rates.spectra import SchmidtSpectrum, spectrum_power, truncate_spectrum
from locc_rates.states import StateError, epr, ghz, schmidt_state
from tests.helpers import flat

H_025 = 0.811278124459133
U = SchmidtSpectrum.uniform
M = BipartitePureMonoid()


def spectrum(*pairs):
    return SchmidtSpectrum.from_pairs(pairs)


def test_toy_example():
    res = achievable_rate_lower_bound(ToyMonoid(1), 5, 2, 0.0, 0.0, n_max=10)
    assert res.best_fraction == Fraction(5, 2)
    assert (res.witness.n, res.witness.m, res.witness.d) == (2, 5, 0)


@given(st.integers(1, 30), st.integers(1, 30), st.integers(1, 5), st.floats(0.0, 1.0), st.integers(1, 20))
def test_toy_search_predicate_and_scaling(x, y, g, delta, n_max):
    T = ToyMonoid(g)
    res = achievable_rate_lower_bound(T, x, y, delta, 0.0, n_max)
    w = res.witness
    assert w.d == generator_budget(delta, w.n)
    assert T.geq(T.power(x, w.n) + T.power(g, w.d), T.power(y, w.m), 0.0)
    assert not T.geq(T.power(x, w.n) + T.power(g, w.d), T.power(y, w.m + 1), 0.0)
    for t in range(1, 5):
        assert T.geq(T.power(x, t * w.n) + T.power(g, t * w.d), T.power(y, t * w.m), 0.0)
    # every row is the exact floor
    for row in res.table:
        assert row.m == (row.n * x + row.d * g) // y


def test_generator_budget_floor():
    assert generator_budget(0.29, 100) == 29
    assert generator_budget(0.05, 19) == 0
    assert generator_budget(0.05, 20) == 1


def test_search_validation():
    with pytest.raises(ValueError):
        achievable_rate_lower_bound(ToyMonoid(), 1, 1, 0.1, 0.0, 0)
    with pytest.raises(ValueError):
        achievable_rate_lower_bound(ToyMonoid(), 1, 1, 0.1, 0.0, 6000)
    with pytest.raises(ValueError):
        achievable_rate_lower_bound(ToyMonoid(), 1, 0, 0.1, 0.0, 5)


def test_non_antitone_oracle_is_reported():
    class Flaky(ToyMonoid):
        # answers yes to a query only the first time it is asked
        def __init__(self):
            super().__init__(1)
            self.seen = set()

        def geq(self, x, y, eps):
            fresh = (x, y) not in self.seen
            self.seen.add((x, y))
            return fresh and x >= y

    with pytest.raises(OracleError):
        achievable_rate_lower_bound(Flaky(), 1, 1, 0.0, 0.0, 3)


def test_majorization_examples():
    for n in range(5):
        for m in range(5):
            assert majorization_geq(U(2**n), U(2**m)) == (n >= m)
    assert not majorization_geq(spectrum((0.9, 1), (0.1, 1)), U(2))
    assert majorization_geq(U(3), U(2))


def test_majorization_huge_uniforms():
    assert majorization_geq(U(2**300), U(2**299))
    assert not majorization_geq(U(2**299), U(2**300))


def test_truncation_example():
    s = spectrum((0.81, 1), (0.09, 2), (0.01, 1))
    t = truncate_spectrum(s, 0.15)
    assert t.rank == 3
    assert flat(t.entries) == pytest.approx(flat([(0.81 / 0.99, 1), (0.09 / 0.99, 2)]))


def test_truncation_of_uniform():
    n, eps = 10, 0.1
    t = truncate_spectrum(U(2**n), eps)
    assert t.rank == 2**n - int(eps**2 * 2**n)


def test_monoid_elements():
    epr_x = monoid_of_bipartite_pure(epr())
    assert flat(M.combine(epr_x, epr_x).entries) == pytest.approx(flat([(0.25, 4)]))
    x = monoid_of_bipartite_pure(schmidt_state([0.75, 0.25]))
    assert flat(M.power(x, 2).entries) == pytest.approx(flat([(0.5625, 1), (0.1875, 2), (0.0625, 1)]))
    assert flat(M.power(M.generator, 7).entries) == pytest.approx(flat([(2.0**-7, 2**7)]))
    with pytest.raises(StateError):
        monoid_of_bipartite_pure(ghz(2, 3))


def test_conversion_probability_examples():
    assert conversion_probability(U(4), U(2)) == pytest.approx(1.0)
    # EPR -> rank-4 uniform: Vidal ratio 0 at the third atom
    assert conversion_probability(U(2), U(4)) == 0.0
    # product -> EPR impossible, EPR -> [0.9, 0.1] certain
    assert conversion_probability(U(1), U(2)) == 0.0
    assert conversion_probability(U(2), spectrum((0.9, 1), (0.1, 1))) == pytest.approx(1.0)
    # [0.9, 0.1] -> EPR succeeds with probability 2 * 0.1
    assert conversion_probability(spectrum((0.9, 1), (0.1, 1)), U(2)) == pytest.approx(0.2)


def test_distillation_window():
    x = monoid_of_bipartite_pure(schmidt_state([0.75, 0.25]))
    res = achievable_rate_lower_bound(M, x, M.generator, 0.05, 0.05, 200)
    assert 0.70 <= res.best_ratio <= H_025 + 0.06
    w = res.witness
    assert w.d == generator_budget(0.05, w.n)
    src = M.combine(M.power(x, w.n), M.power(M.generator, w.d))
    assert M.geq(src, M.power(M.generator, w.m), 0.05)


def test_dilution_rate():
    y = monoid_of_bipartite_pure(schmidt_state([0.75, 0.25]))
    res = achievable_rate_lower_bound(M, M.generator, y, 0.05, 0.05, 200)
    assert res.best_ratio >= 1.10
    assert res.best_ratio <= 1 / H_025 + 0.05 / H_025 + 1e-6


def test_csv_and_dict():
    res = achievable_rate_lower_bound(ToyMonoid(1), 5, 2, 0.5, 0.0, n_max=4)
    lines = res.to_csv().splitlines()
    assert lines[0] == "n,d,m,ratio,best_so_far"
    assert len(lines) == 5
    d = res.to_dict()
    assert d["best_fraction"] == f"{res.best_fraction.numerator}/{res.best_fraction.denominator}"


# -- properties ---------------------------------------------------------------

probs = st.lists(st.floats(0.02, 1.0), min_size=1, max_size=5).map(
    lambda v: SchmidtSpectrum.from_eigenvalues(np.array(v) / sum(v))
)


@given(probs, st.floats(0.0, 0.5))
def test_majorization_reflexive(s, eps):
    assert majorization_geq(s, s, eps)


@given(probs, probs, probs)
def test_majorization_transitive(a, b, c):
    if majorization_geq(a, b) and majorization_geq(b, c):
        assert majorization_geq(a, c)


@given(probs, probs, st.floats(0.0, 0.5), st.floats(0.0, 0.5))
def test_geq_monotone_in_eps(a, b, e1, e2):
    lo, hi = sorted((e1, e2))
    if M.geq(a, b, lo):
        assert M.geq(a, b, hi)


@given(probs, probs)
def test_combine_commutative(a, b):
    ab, ba = M.combine(a, b), M.combine(b, a)
    assert ab.multiplicities == ba.multiplicities
    assert ab.log_weights == pytest.approx(ba.log_weights, abs=1e-9)


@given(probs, probs, probs)
def test_combine_associative(a, b, c):
    l, r = M.combine(M.combine(a, b), c), M.combine(a, M.combine(b, c))
    assert l.multiplicities == r.multiplicities
    assert l.log_weights == pytest.approx(r.log_weights, abs=1e-9)


@given(probs)
def test_everything_above_unit(s):
    assert M.geq(s, M.unit, 0.0)


@given(probs, st.integers(1, 30))
def test_power_matches_spectrum_power(s, n):
    a, b = M.power(s, n), spectrum_power(s, n)
    assert a.multiplicities == b.multiplicities


@settings(max_examples=15)
@given(st.floats(0.55, 0.95), st.floats(0.02, 0.1), st.floats(0.01, 0.1))
def test_sandwich_against_upper_bound(p, delta, eps):
    phi = schmidt_state([p, 1 - p])
    x = monoid_of_bipartite_pure(phi)
    res = achievable_rate_lower_bound(M, x, M.generator, delta, eps, 40)
    upper = rate_upper_bound(phi, epr()).value
    assert res.best_ratio <= upper + delta + 1e-6


@settings(max_examples=10)
@given(st.floats(0.6, 0.9), st.floats(0.0, 0.1), st.floats(0.0, 0.1), st.floats(0.0, 0.1))
def test_best_ratio_monotone_in_eps_and_delta(p, e1, e2, delta):
    x = monoid_of_bipartite_pure(schmidt_state([p, 1 - p]))
    lo, hi = sorted((e1, e2))
    r_lo = achievable_rate_lower_bound(M, x, M.generator, delta, lo, 30).best_ratio
    r_hi = achievable_rate_lower_bound(M, x, M.generator, delta, hi, 30).best_ratio
    assert r_lo <= r_hi
    r_more = achievable_rate_lower_bound(M, x, M.generator, delta + 0.05, lo, 30).best_ratio
    assert r_lo <= r_more
