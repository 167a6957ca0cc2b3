import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from twobridge.dilog import (
    DilogConfig,
    bloch_wigner,
    bloch_wigner_array,
    clausen,
    get_config,
    lobachevsky,
    lobachevsky_series,
    set_config,
    v3,
)

V3 = 1.0149416064096536250


def reference_d(z: complex) -> float:
    with mpmath.workdps(40):
        w = mpmath.mpc(z)
        return float(mpmath.im(mpmath.polylog(2, w)) + mpmath.arg(1 - w) * mpmath.log(abs(w)))


finite = st.floats(-4, 4, allow_nan=False)
points = st.builds(complex, finite, finite).filter(lambda z: abs(z) > 1e-3 and abs(z - 1) > 1e-3)


def test_known_values():
    assert v3() == pytest.approx(V3, abs=1e-15)
    assert bloch_wigner(1j) == pytest.approx(float(mpmath.catalan), abs=1e-15)
    assert 3 * bloch_wigner(cmath.exp(2j * math.pi / 3)) == pytest.approx(2 * V3, abs=1e-14)


def test_exact_zeros():
    for z in (0, 1, -2.5, 0.3, None, complex(math.inf, 0), 7 + 0j):
        assert bloch_wigner(z) == 0.0


@given(points)
def test_against_mpmath(z):
    assert bloch_wigner(z) == pytest.approx(reference_d(z), abs=1e-13)


@given(points)
def test_symmetries(z):
    d = bloch_wigner(z)
    assert bloch_wigner(1 / z) == pytest.approx(-d, abs=1e-13)
    assert bloch_wigner(1 - z) == pytest.approx(-d, abs=1e-13)
    assert bloch_wigner(z.conjugate()) == pytest.approx(-d, abs=1e-14)


@given(points, points)
def test_five_term(x, y):
    assume(abs(x - y) > 1e-3 and abs(x - 1) > 1e-2 and abs(y - 1) > 1e-2)
    D = bloch_wigner
    total = D(x) - D(y) + D(y / x) - D((1 - y) / (1 - x)) + D((1 - 1 / y) / (1 - 1 / x))
    assert abs(total) <= 1e-10


def test_maximum_is_v3():
    # D attains its maximum at e^{i pi/3}
    grid = [complex(a, b) for a in np.linspace(-1, 2, 61) for b in np.linspace(0.05, 2, 40)]
    assert max(bloch_wigner_array(grid)) <= V3 + 1e-15


def test_array_matches_scalar():
    zs = np.array([0.3 + 0.4j, -2 + 1j, 5 - 3j, 1j, 2.0])
    assert np.array_equal(bloch_wigner_array(zs), [bloch_wigner(z) for z in zs])
    assert bloch_wigner_array(np.zeros((0,), dtype=complex)).shape == (0,)


def test_lobachevsky_examples():
    assert lobachevsky(0.0) == 0.0
    assert lobachevsky(math.pi / 2) == 0.0
    assert 2 * lobachevsky(math.pi / 6) == pytest.approx(3 * lobachevsky(math.pi / 3), abs=1e-15)
    assert 3 * lobachevsky(math.pi / 3) == pytest.approx(V3, abs=1e-15)
    assert lobachevsky(math.pi / 4) == pytest.approx(float(mpmath.catalan) / 2, abs=1e-15)


@given(st.floats(-10, 10))
def test_lobachevsky_odd_and_periodic(theta):
    assert lobachevsky(-theta) == pytest.approx(-lobachevsky(theta), abs=1e-14)
    assert lobachevsky(theta + math.pi) == pytest.approx(lobachevsky(theta), abs=1e-13)


@pytest.mark.parametrize("theta", [0.1, 0.5, math.pi / 3, 1.3, 2.9])
def test_lobachevsky_against_sine_series(theta):
    assert lobachevsky(theta) == pytest.approx(lobachevsky_series(theta), abs=1e-10)


@pytest.mark.parametrize("phi", [0.2, 1.0, 2.0, 3.0, -1.7])
def test_clausen_against_mpmath(phi):
    assert clausen(phi) == pytest.approx(float(mpmath.clsin(2, phi)), abs=1e-15)


def test_more_terms_do_not_change_result():
    z = 0.4 + 0.45j
    base = bloch_wigner(z, DilogConfig(series_tol=1e-15, max_terms=40))
    assert bloch_wigner(z, DilogConfig(series_tol=1e-15, max_terms=80)) == pytest.approx(base, abs=1e-15)


def test_loose_tolerance_is_visible():
    loose = DilogConfig(series_tol=1e-1)
    assert abs(v3(loose) - V3) > 1e-9
    previous = set_config(loose)
    try:
        assert get_config() is loose
        assert abs(bloch_wigner(cmath.exp(1j * math.pi / 3)) - V3) > 1e-9
    finally:
        set_config(previous)
    assert v3() == pytest.approx(V3, abs=1e-15)


def test_config_validation():
    with pytest.raises(ValueError):
        DilogConfig(series_tol=0)
    with pytest.raises(ValueError):
        DilogConfig(max_terms=0)
