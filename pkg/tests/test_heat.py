import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hankelpot.heat import HeatPoint, heat_asymptotic_envelope, heat_kernel, heat_kernel_values
from hankelpot.lineint import Singularity, Tail, line_integral

pos = st.floats(1e-2, 1e2)
alphas = st.floats(-0.95, 4.0)


def _gauss(d, t):
    return np.exp(-d * d / (4 * t)) / np.sqrt(4 * np.pi * t)


def test_closed_forms_half_orders():
    x = np.array([0.1, 0.7, 2.0, 5.0, 9.0])
    y = np.array([0.3, 0.5, 2.5, 1.0, 9.5])
    for t in (0.05, 1.0, 20.0):
        np.testing.assert_allclose(heat_kernel_values("modified", -0.5, x, y, t), _gauss(x - y, t) + _gauss(x + y, t),
                                   rtol=1e-13)
        np.testing.assert_allclose(heat_kernel_values("nonmodified", 0.5, x, y, t),
                                   _gauss(x - y, t) - _gauss(x + y, t), rtol=1e-10)
        np.testing.assert_allclose(heat_kernel_values("dunkl", -0.5, x, -y, t), _gauss(x + y, t), rtol=1e-13)
        np.testing.assert_allclose(heat_kernel_values("dunkl", -0.5, x, y, t), _gauss(x - y, t), rtol=1e-13)


def test_matches_mpmath_definition():
    mp.mp.dps = 30
    for a in (-0.7, 0.3, 2.0):
        for x, y, t in [(0.5, 1.5, 0.3), (3.0, 4.0, 0.2), (10.0, 0.1, 7.0)]:
            u = mp.mpf(x * y) / (2 * t)
            ref = (2 * mp.mpf(t)) ** (-a - 1) * mp.exp(-(mp.mpf(x) ** 2 + y**2) / (4 * t)) * u ** (-a) * mp.besseli(a, u)
            assert heat_kernel("modified", a, HeatPoint(x, y, t)) == pytest.approx(float(ref), rel=1e-12)
            dref = mp.mpf(0.5) * (2 * mp.mpf(t)) ** (-a - 1) * mp.exp(-(mp.mpf(x) ** 2 + y**2) / (4 * t)) * (
                u ** (-a) * mp.besseli(a, u) - u ** (-a) * mp.besseli(a + 1, u))
            assert heat_kernel("dunkl", a, HeatPoint(x, -y, t)) == pytest.approx(float(dref), rel=1e-10)


@given(alphas, pos, pos, st.floats(1e-2, 1e2), st.sampled_from([0.5, 2.0, 10.0]))
def test_homogeneity(alpha, x, y, t, r):
    for setting, power in (("modified", -(2 * alpha + 2)), ("dunkl", -(2 * alpha + 2)), ("nonmodified", -1.0)):
        w = heat_kernel_values(setting, alpha, x, y, t)
        wr = heat_kernel_values(setting, alpha, r * x, r * y, r * r * t)
        if w == 0 or not np.isfinite(w):
            continue
        assert wr == pytest.approx(r**power * w, rel=1e-10)


@given(alphas, pos, pos, st.floats(1e-2, 1e2))
def test_symmetry_and_positivity(alpha, x, y, t):
    for setting in ("modified", "nonmodified"):
        a = heat_kernel_values(setting, alpha, x, y, t)
        assert a == heat_kernel_values(setting, alpha, y, x, t)
        assert a >= 0
    d = heat_kernel_values("dunkl", alpha, x, -y, t)
    assert d == pytest.approx(heat_kernel_values("dunkl", alpha, -y, x, t), rel=1e-14)
    if alpha >= -0.5:
        assert d >= 0


@pytest.mark.parametrize("setting, alpha", [("modified", 0.3), ("modified", -0.7), ("dunkl", 0.5), ("dunkl", -0.7)])
def test_mass_conservation(setting, alpha):
    x, t = 1.3, 0.4
    w0 = 2 * alpha + 1

    def integrand(y, a, d, o):
        return heat_kernel_values(setting, alpha, x, y, t) * np.abs(y) ** w0

    lo = -math.inf if setting == "dunkl" else 0.0
    sing = [Singularity(0.0, w0)]
    res = line_integral(integrand, lo, math.inf, singularities=sing, breaks=[x], tails=(Tail(-math.inf), Tail(-math.inf)),
                        rtol=1e-12)
    assert res.value == pytest.approx(1.0, rel=1e-9)


def test_semigroup():
    alpha, x, y, t, s = 0.25, 0.8, 1.7, 0.3, 0.5
    w0 = 2 * alpha + 1

    def integrand(z, a, d, o):
        return heat_kernel_values("modified", alpha, x, z, t) * heat_kernel_values("modified", alpha, z, y, s) * z**w0

    res = line_integral(integrand, 0.0, math.inf, singularities=[Singularity(0.0, w0)], breaks=[x, y],
                        tails=(None, Tail(-math.inf)), rtol=1e-12)
    assert res.value == pytest.approx(float(heat_kernel_values("modified", alpha, x, y, t + s)), rel=1e-9)


def test_envelope_brackets_kernel():
    g = np.geomspace(1e-2, 1e2, 25)
    for setting, alpha in (("modified", -0.7), ("modified", 1.5), ("dunkl", 0.2)):
        ratios = []
        for t in (0.01, 1.0, 100.0):
            for x in g:
                for y in g:
                    for sy in ((1, -1) if setting == "dunkl" else (1,)):
                        p = HeatPoint(x, sy * y, t)
                        env = heat_asymptotic_envelope(setting, alpha, p)
                        if env > 1e-250:  # both sides underflow beyond
                            ratios.append(heat_kernel(setting, alpha, p) / env)
        ratios = np.array(ratios)
        # two-sided estimate: the ratio stays in a fixed bracket (constants depend on alpha)
        assert ratios.min() > 0 and ratios.max() / ratios.min() < 20, (setting, alpha, ratios.min(), ratios.max())


def test_invalid_inputs():
    with pytest.raises(ValueError):
        HeatPoint(1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        heat_kernel_values("modified", 0.0, -1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        heat_asymptotic_envelope("dunkl", -0.5, HeatPoint(1.0, -2.0, 1.0))
