import cmath
import random

import numpy as np
import pytest

from twobridge.acceptance import continued_fraction_oracle
from twobridge.knotparams import make_params
from twobridge.polyseq import (
    IntPoly,
    convergent_values,
    convergents,
    eval_complex,
    format_poly,
    recurrence_newton_ratio,
    riley_poly,
)
from twobridge.scan import valid_pairs


def test_riley_examples():
    assert riley_poly(make_params(5, 3)).coeffs == (1, 0, -1, 0, 1)
    assert riley_poly(make_params(3, 1)).coeffs == (1, 0, 1)
    assert riley_poly(make_params(7, 3)).coeffs == (1, 0, 2, 0, 1, 0, 1)
    assert str(riley_poly(make_params(7, 3))) == "x^6 + x^4 + 2x^2 + 1"


def test_k73_cubic_has_discriminant_minus_23():
    # substitute y = x^2 in x^6 + x^4 + 2x^2 + 1
    c = riley_poly(make_params(7, 3)).coeffs[::2]
    d, c2, b, a = c  # a y^3 + b y^2 + c2 y + d
    disc = 18 * a * b * c2 * d - 4 * b**3 * d + b**2 * c2**2 - 4 * a * c2**3 - 27 * a**2 * d**2
    assert disc == -23


def test_second_convergent_of_53():
    pair = convergents(make_params(5, 3), 2)[1]
    assert pair.P.coeffs == (1, 0, -1)
    assert pair.Q.coeffs == (0, -1)


@pytest.mark.parametrize("pair", [(5, 3), (7, 3), (11, 7), (21, 1)])
def test_first_convergent(pair):
    params = make_params(*pair)
    first = convergents(params, 1)[0]
    assert first.P.coeffs == (0, params.epsilon(1))
    assert first.Q.coeffs == (1,)


def test_symbolic_oracle_small_sample():
    rng = random.Random(5)
    for p, q in rng.sample(valid_pairs(61), 8):
        params = make_params(p, q)
        for pair in convergents(params, 8):
            num, den = continued_fraction_oracle([params.epsilon(k) for k in range(1, pair.n + 1)])
            assert any(
                num == tuple(s * c for c in pair.P.coeffs) and den == tuple(s * c for c in pair.Q.coeffs)
                for s in (1, -1)
            )


@pytest.mark.parametrize("pair", [(5, 3), (13, 5), (31, 11)])
def test_degree_parity_and_determinant(pair):
    params = make_params(*pair)
    prev_p, prev_q = IntPoly.constant(1), IntPoly()
    for c in convergents(params, 60):
        assert c.P.degree == c.n and c.Q.degree == c.n - 1
        assert all(a == 0 for k, a in enumerate(c.P.coeffs) if (k - c.n) % 2)
        assert all(a == 0 for k, a in enumerate(c.Q.coeffs) if (k - c.n + 1) % 2)
        assert (c.P * prev_q - prev_p * c.Q).coeffs == ((-1) ** c.n,)
        prev_p, prev_q = c.P, c.Q


def test_torus_recurrence_is_all_plus():
    x = IntPoly.x()
    cs = convergents(make_params(11, 1), 10)
    for a, b, c in zip(cs, cs[1:], cs[2:]):
        assert c.P == x * b.P + a.P


def test_eval_complex():
    poly = IntPoly((1, 0, -1, 0, 1))
    assert eval_complex(poly, 0) == 1
    assert abs(eval_complex(poly, cmath.exp(1j * cmath.pi / 6))) < 1e-14
    assert abs(eval_complex(IntPoly((1, 0, 1)), 1j)) == 0
    xs = np.array([0.5, 2.0 + 1j])
    assert np.allclose(poly(xs), [eval_complex(poly, complex(x)) for x in xs])


def test_intpoly_arithmetic():
    a, b = IntPoly((1, 2)), IntPoly((-1, 0, 3))
    assert (a * b).coeffs == (-1, -2, 3, 6)
    assert (a + b).coeffs == (0, 2, 3)
    assert (a - a).is_zero()
    assert IntPoly((0, 0, 0)).coeffs == ()
    assert a.shift(2).coeffs == (0, 0, 1, 2)


@pytest.mark.parametrize(
    "coeffs, text",
    [((1, 0, -1, 0, 1), "x^4 - x^2 + 1"), ((0, -1), "-x"), ((3,), "3"), ((), "0"), ((-2, 1, 0, -5), "-5x^3 + x - 2")],
)
def test_format_poly(coeffs, text):
    assert format_poly(IntPoly(coeffs)) == text


def test_numeric_recurrence_matches_exact_polynomials():
    params = make_params(13, 5)
    signs = [params.epsilon(n) for n in range(1, 25)]
    x = 0.3 + 0.7j
    values = convergent_values(signs, x)
    for c in convergents(params, 24):
        a, b = values[c.n]
        P, Q = eval_complex(c.P, x), eval_complex(c.Q, x)
        assert abs(a * Q - b * P) <= 1e-12 * abs(complex(P, 0) if False else abs(P) + abs(Q))


def test_recurrence_newton_ratio_matches_horner():
    params = make_params(11, 3)
    poly = riley_poly(params)
    deriv = IntPoly(tuple(k * a for k, a in enumerate(poly.coeffs))[1:])
    xs = np.array([0.2 + 0.4j, 1.5 - 0.3j, -0.7 + 1.1j])
    expected = poly(xs) / deriv(xs)
    assert np.allclose(recurrence_newton_ratio(params)(xs), expected, rtol=1e-12)
