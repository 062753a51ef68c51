import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hankelpot import bessel

mp.mp.dps = 30

ORDERS = [-0.9, -0.5, -0.2, 0.0, 0.3, 1.0, 2.5, 7.0]
ARGS = [1e-8, 1e-3, 0.4, 0.99, 1.0, 3.7, 19.9, 20.0, 45.0, 300.0, 1e4]


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


@pytest.mark.parametrize("alpha", ORDERS)
def test_phi_matches_mpmath(alpha):
    for u in ARGS:
        ref = mp.besselj(alpha, u) / mp.mpf(u) ** alpha
        got = float(bessel.phi(alpha, u))
        assert abs(got - float(ref)) <= 1e-12 * max(1.0, abs(float(ref))) + 1e-14 * abs(float(ref)), (alpha, u)


@pytest.mark.parametrize("alpha", ORDERS)
def test_scaled_i_matches_mpmath(alpha):
    for u in ARGS:
        ref = float(mp.besseli(alpha, u) * mp.exp(-u))
        assert _rel(float(bessel.bessel_i_scaled(alpha, u)), ref) < 1e-12, (alpha, u)


@pytest.mark.parametrize("alpha", [-0.75, -0.5, 0.0, 0.5, 2.0])
def test_dunkl_profile_matches_definition(alpha):
    for u in [-50.0, -3.0, -0.5, 0.2, 2.0, 30.0]:
        mp.mp.dps = 80  # the negative branch cancels e^{|u|} down to e^{-|u|}
        au = mp.mpf(abs(u))
        ref = mp.besseli(alpha, au) / au**alpha + mp.mpf(u) * mp.besseli(alpha + 1, au) / au ** (alpha + 1)
        mp.mp.dps = 30
        assert _rel(float(bessel.dunkl_profile(alpha, u)), float(ref)) < 1e-11, (alpha, u)


def test_values_at_origin():
    for a in ORDERS:
        assert float(bessel.phi(a, 0.0)) == pytest.approx(2.0**-a / math.gamma(a + 1), rel=1e-15)
        assert complex(bessel.psi(a, 0.0)).real == pytest.approx(2.0 ** (-a - 1) / math.gamma(a + 1), rel=1e-15)
    assert float(bessel.bessel_i_scaled(0.0, 0.0)) == 1.0
    assert float(bessel.bessel_i_scaled(0.5, 0.0)) == 0.0
    assert math.isinf(float(bessel.bessel_i_scaled(-0.5, 0.0)))


def test_half_order_closed_forms():
    u = np.geomspace(1e-3, 1e3, 50)
    np.testing.assert_allclose(bessel.varphi(-0.5, u), math.sqrt(2 / math.pi) * np.cos(u), atol=1e-13)
    np.testing.assert_allclose(bessel.varphi(0.5, u), math.sqrt(2 / math.pi) * np.sin(u), atol=1e-13)


def test_invalid_order_rejected():
    with pytest.raises(ValueError):
        bessel.check_order(-1.0)
    with pytest.raises(ValueError):
        bessel.bessel_j(0.0, -1.0)


@given(st.floats(-0.95, 6.0), st.floats(0.0, 60.0))
def test_phi_is_even_and_bounded(alpha, u):
    v = float(bessel.phi(alpha, u))
    assert float(bessel.phi(alpha, -u)) == v
    if alpha >= -0.5:
        # |J_alpha(u)| u^{-alpha} is maximal at the origin for alpha >= -1/2
        assert abs(v) <= float(bessel.phi(alpha, 0.0)) * (1 + 1e-12)


@given(st.floats(-0.95, 5.0), st.floats(21.0, 1e6))
def test_large_argument_scaled_i_follows_leading_term(alpha, u):
    lead = 1.0 / math.sqrt(2 * math.pi * u)
    v = float(bessel.bessel_i_scaled(alpha, u))
    assert abs(v / lead - 1.0) <= abs(4 * alpha * alpha - 1) / (8 * u) * 1.5 + 1e-14
