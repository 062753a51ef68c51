import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hankelpot.potentials import EArgs, e_a, e_a_envelope, kernel_values, potential_kernel, riesz_c
from hankelpot.profiles import fast_kernel_values
from hankelpot.settings import Kind, PotentialParams, Setting

pos = st.floats(1e-2, 1e2)


def _mp_kernel(setting, alpha, sigma, kind, x, y):
    """``Gamma(sigma)^{-1} int_0^inf W_t(x, y) t^{sigma-1} (e^{-t}) dt`` with mpmath."""
    mp.mp.dps = 25
    a = mp.mpf(alpha)
    x, y = mp.mpf(x), mp.mpf(y)

    def w(t):
        u = x * y / (2 * t)
        base = (2 * t) ** (-a - 1) * mp.exp(-(x * x + y * y) / (4 * t))
        if setting == "dunkl":
            au = abs(u)
            val = mp.mpf(0.5) * base * (mp.besseli(a, au) / au**a + u * mp.besseli(a + 1, au) / au ** (a + 1))
        else:
            val = base * mp.besseli(a, u) / u**a
            if setting == "nonmodified":
                val *= (x * y) ** (a + mp.mpf(0.5))
        damp = mp.exp(-t) if kind == "bessel" else 1
        return val * t ** (sigma - 1) * damp

    d2 = (abs(x) - abs(y)) ** 2
    big = mp.mpf(10) ** 6
    pts = [0, d2 / 64, d2 / 4, d2, 4 * d2, 64 * d2 + 1, 1e3, big]
    head = mp.quad(w, pts)
    if kind == "bessel":
        tail = mp.quad(w, [big, mp.inf])
    else:
        # beyond t = 1e6 use the expansion of the heat kernel for large t:
        # W_t = c (2t)^{-a-1} (1 - r2/(4t) + O(t^-2)), c and r2 by setting
        c = 2 ** (-a) / mp.gamma(a + 1)
        r2 = x * x + y * y
        if setting == "dunkl":
            c, r2 = c / 2, r2 - x * y / (a + 1)
        if setting == "nonmodified":
            c *= (x * y) ** (a + mp.mpf(0.5))
        e1 = sigma - a - 2
        tail = c * 2 ** (-a - 1) * (-(big ** (e1 + 1)) / (e1 + 1) + r2 / 4 * big ** e1 / e1)
    return float((head + tail) / mp.gamma(sigma))


@pytest.mark.parametrize(
    "setting, alpha, sigma, kind, x, y",
    [
        ("modified", 0.3, 0.4, "riesz", 0.7, 1.9),
        ("modified", -0.6, 0.2, "riesz", 2.0, 0.5),
        ("modified", 1.0, 1.5, "bessel", 3.0, 3.5),
        ("nonmodified", 0.2, 0.6, "riesz", 0.4, 1.2),
        ("nonmodified", -0.8, 0.7, "bessel", 1.0, 2.0),
        ("dunkl", 0.5, 0.75, "riesz", 1.5, -0.8),
        ("dunkl", 0.5, 0.75, "bessel", 1.5, 0.8),
        ("dunkl", 0.1, 1.2, "bessel", 0.3, -2.0),
    ],
)
def test_matches_mpmath_time_integral(setting, alpha, sigma, kind, x, y):
    got = potential_kernel(setting, PotentialParams(alpha, sigma, kind), x, y, tol=1e-12).value
    assert got == pytest.approx(_mp_kernel(setting, alpha, sigma, kind, x, y), rel=1e-9)


@pytest.mark.parametrize("sigma", [0.1, 0.25, 0.4])
def test_order_minus_half_closed_forms(sigma):
    rng = np.random.default_rng(1)
    x, y = rng.uniform(0.01, 10, 50), rng.uniform(0.01, 10, 50)
    c = riesz_c(sigma)
    e = 2 * sigma - 1
    d = kernel_values("dunkl", PotentialParams(-0.5, sigma), x, -y)[0]
    np.testing.assert_allclose(d, c * (x + y) ** e, rtol=1e-9)
    m = kernel_values("modified", PotentialParams(-0.5, sigma), x, y)[0]
    np.testing.assert_allclose(m, c * (np.abs(x - y) ** e + (x + y) ** e), rtol=1e-9)
    nm = kernel_values("nonmodified", PotentialParams(0.5, sigma), x, y)[0]
    np.testing.assert_allclose(nm, c * (np.abs(x - y) ** e - (x + y) ** e), rtol=1e-8)


def test_riesz_constant():
    assert riesz_c(0.25) == pytest.approx(math.gamma(0.25) / (4**0.25 * math.sqrt(math.pi) * math.gamma(0.25)))


@given(st.floats(-0.95, 3.0), st.floats(0.05, 4.0), pos, pos)
def test_infinite_exactly_beyond_alpha_plus_one(alpha, sigma, x, y):
    assume(abs(x - y) > 1e-6 * (x + y))
    v = potential_kernel("modified", PotentialParams(alpha, sigma), x, y).value
    assert math.isinf(v) == (sigma >= alpha + 1)


@given(st.floats(-0.95, 3.0), st.floats(0.05, 0.95), pos, pos, st.sampled_from([0.5, 2.0, 10.0]))
def test_riesz_homogeneity(alpha, frac, x, y, r):
    sigma = frac * (alpha + 1)
    assume(abs(x - y) > 1e-3 * (x + y))
    p = PotentialParams(alpha, sigma)
    for setting, power in (("modified", 2 * sigma - 2 * alpha - 2), ("nonmodified", 2 * sigma - 1)):
        k = kernel_values(setting, p, x, y, tol=1e-12)[0]
        kr = kernel_values(setting, p, r * x, r * y, tol=1e-12)[0]
        assert kr == pytest.approx(r**power * k, rel=1e-10)


@given(st.floats(-0.95, 3.0), st.floats(0.05, 0.95), pos, pos)
def test_bessel_below_riesz(alpha, frac, x, y):
    sigma = frac * (alpha + 1)
    assume(abs(x - y) > 1e-3 * (x + y))
    r = kernel_values("modified", PotentialParams(alpha, sigma, "riesz"), x, y)[0]
    b = kernel_values("modified", PotentialParams(alpha, sigma, "bessel"), x, y)[0]
    assert 0 < b <= r * (1 + 1e-9)


# profiles are tabulated once per (alpha, sigma); sample from a fixed set so they are reused
@given(st.sampled_from([(-0.5, 0.25), (0.0, 0.5), (0.7, 1.2), (2.0, 0.3)]), pos, pos, st.booleans())
def test_profiles_agree_with_direct_evaluation(pair, x, y, opposite):
    alpha, sigma = pair
    assume(abs(x - y) > 1e-4 * (x + y))
    p = PotentialParams(alpha, sigma)
    for setting in Setting:
        yy = -y if (setting is Setting.DUNKL and opposite) else y
        direct = kernel_values(setting, p, x, yy, tol=1e-12)[0]
        fast = fast_kernel_values(setting, p, x, yy)
        assert fast == pytest.approx(direct, rel=1e-10)


def test_e_a_against_quadrature():
    mp.mp.dps = 25
    for A, T, S in [(-1.5, 0.3, 2.0), (-1.0, 1e-3, 0.0), (0.4, 2.0, 5.0), (-0.5, 0.0, 3.0)]:
        ref = float(mp.quad(lambda t: t**A * mp.exp(-T / t - S * t), [0, 0.01, 1]))
        assert e_a(EArgs(A, T, S)).value == pytest.approx(ref, rel=1e-10)
    assert math.isinf(e_a(EArgs(-1.0, 0.0, 1.0)).value)
    assert math.isinf(e_a(EArgs(-2.0, 0.0, 0.0)).value)


@given(st.floats(-3.0, 2.0), st.floats(1e-4, 1e2), st.floats(0.0, 1e2))
def test_e_a_envelope_brackets(A, T, S):
    v = e_a(EArgs(A, T, S)).value
    shape, arg = e_a_envelope(EArgs(A, T, S))
    # E_A lies between shape*exp(-c1 arg)/C and C*shape*exp(-c2 arg)
    lower = shape * math.exp(-4.0 * arg) / 50.0
    upper = 50.0 * shape * math.exp(-0.5 * arg)
    assume(lower > 1e-290)
    assert lower <= v <= upper


def test_diagonal_and_invalid():
    assert math.isinf(potential_kernel("modified", PotentialParams(0.0, 0.25), 1.0, 1.0).value)
    assert math.isfinite(potential_kernel("modified", PotentialParams(0.0, 0.75), 1.0, 1.0).value)
    with pytest.raises(ValueError):
        PotentialParams(0.0, -1.0)
    with pytest.raises(ValueError):
        PotentialParams(-1.0, 0.5)
    with pytest.raises(ValueError):
        potential_kernel("modified", PotentialParams(0.0, 0.5), 1.0, 2.0, tol=0.0)
    assert Kind.parse("Bessel") is Kind.BESSEL


@pytest.mark.parametrize("alpha", [0.1315789473684209, 0.4263157894736841, 0.7210526315789473])
def test_divergence_line_is_exact_in_floating_point(alpha):
    # alpha - (alpha + 1) rounds to -0.9999999999999999 for these orders
    p = PotentialParams(alpha, alpha + 1)
    vals = kernel_values("modified", p, [0.7, 0.0, 0.7], [1.9, 1.9, 0.0])[0]
    assert np.all(np.isinf(vals))
    assert np.isinf(kernel_values("dunkl", p, 0.7, -1.9)[0])
    bessel_origin = kernel_values("modified", PotentialParams(alpha, alpha + 1, "bessel"), 0.0, 0.0)[0]
    assert np.isinf(bessel_origin)
