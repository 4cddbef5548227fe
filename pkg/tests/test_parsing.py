import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from locc_rates.parsing import StateParseError, parse_state, state_to_json
from locc_rates.states import epr, ghz, random_pure_state, schmidt_state, tensor, tensor_power


def same(a, b):
    return a.dims == b.dims and np.allclose(a.amps, b.amps, atol=1e-15)


def test_constructors():
    assert same(parse_state("ghz:r=2,k=3"), ghz(2, 3))
    assert same(parse_state("schmidt:[0.9,0.1]"), schmidt_state([0.9, 0.1]))
    s = parse_state("epr:pair=(1,3),k=3")
    assert same(s, epr(3, (1, 3)))
    assert s.dims == (2, 1, 2)


def test_products_and_powers():
    assert same(parse_state("ghz:r=2,k=3 ^ 2"), tensor_power(ghz(2, 3), 2))
    tri = parse_state("epr:pair=(1,2),k=3 * epr:pair=(2,3),k=3 * epr:pair=(1,3),k=3")
    assert tri.dims == (4, 4, 4)
    mixed = parse_state("schmidt:[0.5,0.5]^2*schmidt:[0.9,0.1]")
    assert same(mixed, tensor(tensor_power(epr(), 2), schmidt_state([0.9, 0.1])))


def test_json_round_trip(rng):
    phi = random_pure_state((2, 3), rng)
    back = parse_state(json.dumps(state_to_json(phi)))
    assert back.dims == phi.dims
    assert np.allclose(back.amps, phi.amps, atol=1e-15)


def test_json_inside_product():
    lit = '{"dims": [2, 2], "amps": [[0.6, 0], [0, 0], [0, 0], [0, 0.8]]}'
    s = parse_state(f"{lit} * schmidt:[1.0]")
    assert s.dims == (2, 2)
    assert s.amps[0] == pytest.approx(0.6) and s.amps[3] == pytest.approx(0.8j)


def test_rejects_unnormalized():
    with pytest.raises(StateParseError, match="not normalized"):
        parse_state("schmidt:[0.9,0.2]")
    with pytest.raises(StateParseError):
        parse_state('{"dims": [2], "amps": [[1, 0], [1, 0]]}')


def test_accepts_printing_round_off():
    s = parse_state(f"schmidt:[{0.9 + 5e-9},0.1]")
    assert math.isclose(np.vdot(s.amps, s.amps).real, 1.0, abs_tol=1e-12)


@pytest.mark.parametrize(
    "text, pos",
    [
        ("", 0),
        ("ghz:r=2", 4),
        ("ghz:r=2,k=3 * ", 14),
        ("bell:[1]", 0),
        ("ghz:r=2,k=3,x=1", 12),
        ("schmidt:[0.5,0.5", 16),
        ("ghz:r=2,k=3 * ghz:r=2,k=2", 14),
    ],
)
def test_errors_carry_positions(text, pos):
    with pytest.raises(StateParseError) as info:
        parse_state(text)
    assert info.value.position == pos


def test_bad_json_position():
    with pytest.raises(StateParseError) as info:
        parse_state('{"dims": [2], "amps": [[1, 0], [0, 0]],}')
    assert info.value.position > 0


@given(st.lists(st.floats(0.01, 1.0), min_size=1, max_size=6))
def test_schmidt_literal_round_trip(weights):
    c = [w / sum(weights) for w in weights]
    s = parse_state("schmidt:" + json.dumps(c))
    assert same(s, schmidt_state(c)) or np.allclose(s.amps, schmidt_state(c).amps, atol=1e-12)
