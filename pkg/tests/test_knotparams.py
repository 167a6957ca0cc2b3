from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from twobridge.dilog import v3
from twobridge.knotparams import (
    NotCoprime,
    NotOdd,
    OutOfRange,
    cf_positive,
    epsilon_sequence,
    equivalent_params,
    lackenby_bounds,
    make_params,
)
from twobridge.scan import valid_pairs

PAIRS = valid_pairs(99)


@st.composite
def bridge_pairs(draw, pmax=99):
    return draw(st.sampled_from(valid_pairs(pmax)))


def test_ell_examples():
    assert make_params(5, 3).ell == 3
    assert make_params(7, 3).ell == 9
    for p in (3, 5, 11, 49):
        assert make_params(p, 1).ell == 2 * p - 1


@pytest.mark.parametrize(
    "p, q, exc",
    [(9, 3, NotCoprime), (15, 5, NotCoprime), (8, 3, NotOdd), (7, 4, NotOdd),
     (7, 9, OutOfRange), (7, -1, OutOfRange), (1, 1, OutOfRange), (5, 5, OutOfRange)],
)
def test_make_params_rejects(p, q, exc):
    with pytest.raises(exc):
        make_params(p, q)


def test_rejects_non_integers():
    with pytest.raises(TypeError):
        make_params(7.0, 3)


@given(bridge_pairs())
def test_ell_invariants(pair):
    params = make_params(*pair)
    p, q, ell = params.p, params.q, params.ell
    assert ell % 2 == 1 and 0 < ell < 2 * p
    assert (ell * q) % (2 * p) == 2 * p - 1


def test_epsilon_examples():
    assert tuple(epsilon_sequence(make_params(5, 3), 4)) == (1, -1, -1, 1)
    assert tuple(epsilon_sequence(make_params(7, 3), 6)) == (1, 1, -1, -1, 1, 1)
    assert set(epsilon_sequence(make_params(13, 1), 12)) == {1}
    assert str(epsilon_sequence(make_params(7, 3), 6)) == "+ + - - + +"


def test_sign_sequence_is_one_based():
    signs = epsilon_sequence(make_params(5, 3), 4)
    assert signs[1] == 1 and signs[4] == 1
    with pytest.raises(IndexError):
        signs[0]


@given(bridge_pairs())
def test_epsilon_palindrome_and_antiperiodic(pair):
    params = make_params(*pair)
    p = params.p
    seq = epsilon_sequence(params, 2 * p)
    for i in range(1, p):
        assert seq[i] == seq[p - i]
        assert seq[i + p] == -seq[i]
    assert params.epsilon(0) == 1


@pytest.mark.parametrize("p, q, terms", [(7, 3, (2, 3)), (5, 3, (1, 1, 2)), (9, 1, (9,)), (13, 5, (2, 1, 1, 2))])
def test_cf_examples(p, q, terms):
    assert cf_positive(p, q).terms == terms


@given(bridge_pairs())
def test_cf_round_trip(pair):
    cf = cf_positive(*pair)
    assert cf.evaluate() == Fraction(*pair)
    assert all(a >= 1 for a in cf.terms)
    if len(cf) > 1:
        assert cf.terms[-1] >= 2


def test_cf_rejects_out_of_range():
    with pytest.raises(OutOfRange):
        cf_positive(3, 5)


def test_lackenby_bounds():
    c = v3()
    assert lackenby_bounds(cf_positive(9, 1)) == pytest.approx((-c / 2, 0.0))
    assert lackenby_bounds(cf_positive(7, 3)) == pytest.approx((0.0, 16 * c))
    lower, upper = lackenby_bounds(cf_positive(5, 3))
    assert lower == pytest.approx(0.5074708032, abs=1e-9)
    assert upper == pytest.approx(32.4781314051, abs=1e-9)


def test_equivalent_params_examples():
    assert equivalent_params(make_params(5, 3)) == {(5, 3)}
    assert equivalent_params(make_params(7, 3)) == {(7, 3), (7, 5)}
    for p in (3, 5, 9, 21):
        assert equivalent_params(make_params(p, 1)) == {(p, 1)}


@given(bridge_pairs())
def test_equivalent_params_closed(pair):
    params = make_params(*pair)
    group = equivalent_params(params)
    assert (params.p, params.q) in group
    for p, q in group:
        assert q % 2 == 1 and gcd(p, q) == 1
        assert equivalent_params(make_params(p, q)) == group
