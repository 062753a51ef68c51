import math
import warnings
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hankelpot import functions as F
from hankelpot import lplq as L
from hankelpot.lplq import ExponentQuad, Verdict

SETTINGS = ["modified", "dunkl", "nonmodified"]


@st.composite
def rational(draw, lo, hi, den=12):
    k = draw(st.integers(math.ceil(lo * den), math.floor(hi * den)))
    return Fraction(k, den)


@st.composite
def riesz_params(draw):
    alpha = draw(rational(-10 / 12, 2.5))
    sigma = draw(rational(1 / 12, float(alpha + 1) - 1 / 12))
    assume(0 < sigma < alpha + 1)
    return alpha, sigma


def _inv_to_p(ip):
    return "inf" if ip == 0 else 1 / ip


@st.composite
def exponent_pair(draw, sigma, dim):
    ip = draw(rational(0, 1))
    # hit the scaling line often
    on_line = draw(st.booleans())
    iq = ip - 2 * sigma / dim if on_line else draw(rational(0, 1))
    assume(0 <= iq <= 1)
    return _inv_to_p(ip), _inv_to_p(iq)


# ---------------------------------------------------------------------------
# dual routes agree
# ---------------------------------------------------------------------------


@given(st.data(), st.sampled_from(SETTINGS))
def test_unweighted_route_matches_weighted_route(data, setting):
    alpha, sigma = data.draw(riesz_params())
    dim = 1 if setting == "nonmodified" else 2 * alpha + 2
    p, q = data.draw(exponent_pair(sigma, dim))
    direct = L.riesz_bounded_unweighted(setting, alpha, sigma, p, q)
    weighted = L.riesz_bounded(setting, alpha, sigma, ExponentQuad(p, q))
    assert direct.bounded == weighted.bounded


@given(st.data(), st.sampled_from(SETTINGS))
def test_unweighted_domain_matches_weighted_domain(data, setting):
    alpha, sigma = data.draw(riesz_params())
    p = _inv_to_p(data.draw(rational(0, 1)))
    assert L.domain_inclusion_unweighted(setting, alpha, sigma, p) == L.domain_inclusion(setting, alpha, sigma, p)


@given(st.data())
def test_nonmodified_estimate_is_shifted_modified_estimate(data):
    alpha, sigma = data.draw(riesz_params())
    p, q = data.draw(exponent_pair(sigma, 1))
    a = data.draw(rational(-2, 2))
    b = data.draw(rational(-2, 2))
    e = ExponentQuad(p, q, a, b)
    nm = L.riesz_bounded("nonmodified", alpha, sigma, e)
    mod = L.riesz_bounded("modified", alpha, sigma, L.nonmodified_shift(alpha, e), use_e_prime=True)
    assert nm.bounded == mod.bounded


@given(st.data(), st.sampled_from(["modified", "dunkl"]))
def test_two_forms_of_local_condition_agree_on_scaling_line(data, setting):
    alpha, sigma = data.draw(riesz_params())
    ip, iq = data.draw(rational(0, 1)), data.draw(rational(0, 1))
    a = data.draw(rational(-2, 3))
    # choose b on the scaling line
    b = (iq - ip) * (2 * alpha + 2) + 2 * sigma - a
    e = ExponentQuad(_inv_to_p(ip), _inv_to_p(iq), a, b)
    plain = L.riesz_bounded(setting, alpha, sigma, e)
    prime = L.riesz_bounded(setting, alpha, sigma, e, use_e_prime=True)
    assert "b" not in plain.failed_conditions
    assert plain == prime


@given(st.data(), st.sampled_from(SETTINGS))
def test_growth_exponent_vanishes_exactly_on_scaling_line(data, setting):
    alpha, sigma = data.draw(riesz_params())
    e = ExponentQuad(_inv_to_p(data.draw(rational(0, 1))), _inv_to_p(data.draw(rational(0, 1))),
                     data.draw(rational(-1, 1)), data.draw(rational(-1, 1)))
    v = L.riesz_bounded(setting, alpha, sigma, e)
    assert (L.growth_exponent(setting, alpha, sigma, e) == 0) == ("b" not in v.failed_conditions)


@given(st.data(), st.sampled_from(SETTINGS))
def test_boundedness_implies_domain(data, setting):
    alpha, sigma = data.draw(riesz_params())
    dim = 1 if setting == "nonmodified" else 2 * alpha + 2
    p, q = data.draw(exponent_pair(sigma, dim))
    a = data.draw(rational(-1, 1))
    b = (Fraction(1) / Fraction(q) if q != "inf" else 0) - (1 / Fraction(p) if p != "inf" else 0)
    b = b * dim + 2 * sigma - a
    e = ExponentQuad(p, q, a, b)
    if L.riesz_bounded(setting, alpha, sigma, e).bounded:
        assert L.domain_inclusion(setting, alpha, sigma, p, a)


@given(st.data())
def test_bessel_contains_riesz_band(data):
    # for alpha >= -1/2 a bounded unweighted Riesz pair is a bounded Bessel pair
    alpha = data.draw(rational(-0.5, 2.5))
    sigma = data.draw(rational(1 / 12, float(alpha + 1) - 1 / 12))
    assume(0 < sigma < alpha + 1)
    p, q = data.draw(exponent_pair(sigma, 2 * alpha + 2))
    if L.riesz_bounded_unweighted("modified", alpha, sigma, p, q).bounded:
        assert L.bessel_bounded("modified", alpha, sigma, p, q).bounded


# ---------------------------------------------------------------------------
# hand-checked cases
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("setting,alpha,sigma,e,bounded,failed", [
    ("modified", 0, "1/2", ExponentQuad(2, "inf"), False, ["d"]),
    ("modified", 0, "1/4", ExponentQuad(2, 4), True, []),
    ("modified", 0, "1/4", ExponentQuad(4, 2), False, ["a", "b"]),
    ("modified", 0, "1/4", ExponentQuad(1, "4/3"), False, ["c"]),
    ("modified", 0, "1/4", ExponentQuad(1, "inf", 0, "-3/2"), False, ["e"]),
    ("modified", 0, "3/4", ExponentQuad(1, "inf", 0, "-1/2"), True, []),
    ("dunkl", 0, "3/4", ExponentQuad(1, "inf", "-1/4", "-1/4"), True, []),
    ("modified", 0, "3/4", ExponentQuad(1, "inf", "1/2", -1), False, ["c"]),
    ("modified", 0, "3/4", ExponentQuad(1, "inf", -1, "1/2"), False, ["d"]),
    ("modified", 0, "1/2", ExponentQuad(2, 2, 1, 0), False, ["c"]),
    ("modified", 0, "1/2", ExponentQuad(2, 2, "1/2", "1/2"), True, []),
    ("modified", 0, "1/2", ExponentQuad(2, 2, 0, 1), False, ["d"]),
    ("nonmodified", 0, "1/4", ExponentQuad(2, "inf"), False, ["e"]),
    ("nonmodified", 0, "1/4", ExponentQuad("4/3", 4), True, []),
    ("nonmodified", "-3/4", "1/8", ExponentQuad(2, 4), False, ["d"]),
])
def test_weighted_cases(setting, alpha, sigma, e, bounded, failed):
    v = L.riesz_bounded(setting, alpha, sigma, e)
    assert v.bounded is bounded and v.failed_conditions == failed


def test_unweighted_and_weak_type_cases():
    assert L.riesz_bounded_unweighted("modified", "-3/4", "1/8", "4/3", 4).failed_conditions == ["alpha"]
    assert L.riesz_bounded_unweighted("dunkl", 0, "1/2", 1, 2).failed_conditions == ["p>1"]
    assert L.riesz_bounded_unweighted("modified", 0, "1/2", 2, "inf").failed_conditions == ["p-range"]
    assert L.riesz_bounded_unweighted("nonmodified", 0, "1/4", 2, "inf").failed_conditions == ["q<inf"]
    assert L.weak_type_bounded("modified", "-1/2", "1/4")
    assert not L.weak_type_bounded("dunkl", "-3/4", "1/8")
    with pytest.raises(ValueError):
        L.weak_type_bounded("nonmodified", 0, "1/4")


def test_bessel_cases():
    assert L.bessel_bounded("modified", 0, "1/2", 2, 4).bounded
    assert L.bessel_bounded("modified", 0, "1/2", 4, 4).bounded
    assert L.bessel_bounded("modified", 0, "1/2", 4, 2).failed_conditions == ["band-upper"]
    assert L.bessel_bounded("modified", 0, "1/2", 2, "inf").failed_conditions == ["corner"]
    assert L.bessel_bounded("modified", 0, "1/2", 1, 2).failed_conditions == ["corner"]
    assert L.bessel_bounded("modified", "-3/4", 1, 2, 4).failed_conditions == ["p=q"]
    assert L.bessel_bounded("dunkl", "-3/4", 1, 3, 3).bounded
    assert L.bessel_bounded("nonmodified", "-3/4", "1/8", 1, 1).failed_conditions == ["domain"]
    assert not L.domain_inclusion("nonmodified", "-3/4", "1/8", 1, kind="bessel")
    assert L.domain_inclusion("modified", "-3/4", "1/8", 1, kind="bessel")
    with pytest.raises(ValueError):
        L.domain_inclusion("modified", 0, "1/4", 2, a=1, kind="bessel")


def test_hardy_cases():
    assert L.hardy_bounded(0, -1, 2, 2)
    assert not L.hardy_bounded("1/2", "-1/2", 2, 2)
    assert L.hardy_bounded(0, 0, 1, "inf")
    assert not L.hardy_bounded("1/2", "1/2", 1, "inf")
    assert L.hardy_bounded(1, 0, 2, 2, variant="dual")
    assert not L.hardy_bounded(0, -1, 2, 2, variant="dual")
    assert L.hardy_bounded(0, 0, 1, "inf", variant="dual")
    assert not L.hardy_bounded("-1/2", "-1/2", 1, "inf", variant="dual")
    assert not L.hardy_bounded(0, -1, 2, 1)
    with pytest.raises(ValueError):
        L.hardy_bounded(0, -1, 2, 2, variant="other")


def test_exact_arithmetic_and_validation():
    assert L.exact("3/2") == Fraction(3, 2)
    assert L.exact(0.1) == Fraction(1, 10)
    assert L.exact("inf") == math.inf
    assert isinstance(L.exact(math.pi), float)
    with pytest.raises(ValueError):
        ExponentQuad("1/2", 2)
    with pytest.raises(ValueError):
        Verdict(True, ["a"])
    with pytest.raises(ValueError):
        L.riesz_bounded("modified", 0, 1, ExponentQuad(2, 2))
    assert L.riesz_bounded("modified", 0, "1/4", ExponentQuad(2, 4)).to_json() == \
        '{"bounded": true, "failed_conditions": []}'


def test_float_boundary_comparison_warns():
    p = 1 / (0.75 + 1e-13)
    with pytest.warns(L.NearBoundaryWarning):
        v = L.riesz_bounded("modified", 0.0, 0.25, ExponentQuad(p, 2))
    assert "b" not in v.failed_conditions


def test_shift_formula_values():
    s = L.nonmodified_shift(Fraction(1, 2), ExponentQuad(2, 4, 0, 0))
    assert (s.a_exact, s.b_exact) == (Fraction(0), Fraction(-1, 2))


# ---------------------------------------------------------------------------
# empirical scans
# ---------------------------------------------------------------------------


def test_dilation_invariance_on_scaling_line():
    sweep = L.dilation_sweep("modified", 0.0, 0.25, ExponentQuad(2, 4), F.bump(1.0, 2.0))
    assert sweep.expected_slope == 0.0
    assert sweep.invariance < 1e-8


def test_dilation_slope_off_scaling_line():
    e = ExponentQuad(2, 2, "0.2", "0.6")
    sweep = L.dilation_sweep("dunkl", 0.5, 0.25, e, F.bump(1.0, 2.0))
    assert sweep.expected_slope == pytest.approx(0.3)
    assert sweep.slope_error < 0.05


def test_spreading_grows_when_p_exceeds_q():
    ratios = L.spreading_scan("modified", 0.0, 0.5, ExponentQuad(4, 2, 0, "1/2"), F.bump(1.0, 2.0),
                              sizes=(1, 4, 16))
    assert ratios[2] > 1.5 * ratios[0]


def test_empirical_scan_is_finite_when_bounded():
    family = [F.bump(1.0, 2.0), F.bump(0.5, 4.0), F.indicator(0.1, 0.3)]
    v = L.empirical_norm_scan("modified", 0.0, 0.25, ExponentQuad(2, 4), family)
    assert math.isfinite(v) and v > 0


# ---------------------------------------------------------------------------
# counterexamples
# ---------------------------------------------------------------------------


def test_manifest_matches_registry():
    man = L.counterexample_manifest()
    assert set(man) == set(L.COUNTEREXAMPLES) and len(man) == 10
    for entry in man.values():
        assert set(entry) == {"operator", "claim", "family_parameter", "parameter_ranges"}


def test_unknown_tag_and_out_of_range_parameters():
    with pytest.raises(KeyError):
        L.counterexample_run("no-such-family")
    with pytest.raises(ValueError):
        L.counterexample_run("main-i-h0", a=0.5)
    with pytest.raises(ValueError):
        L.counterexample_run("bes-glob-pq", p=2.0, q=4.0)


@pytest.mark.parametrize("tag", ["weak-power", "S-endpoint", "main-T-endpoint", "main-i-h0-boundary"])
def test_fast_counterexamples_diverge(tag):
    r = L.counterexample_run(tag)
    assert r.diverged
    assert all(g >= L.GROWTH_FACTOR for g in r.growth_factors)
    assert r.to_dict()["tag"] == tag


def test_divergence_rule():
    assert not L._diverging([1.0, 1.5, 1.75, 1.875])
    assert not L._diverging([1.0, 2.0, 4.0])
    assert not L._diverging([1.0, 2.0, math.inf, 8.0])
    assert L._diverging([1.0, 2.0, 4.0, 8.0])


# ---------------------------------------------------------------------------
# radial cross-check
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n,sigma", [(3, 0.7), (3, 0.5), (4, 0.6), (2, 0.5), (1, 0.3)])
def test_spherical_average_against_direct_quadrature(n, sigma):
    r, rho = 1.3, 0.6
    surf = 2 * mp.pi ** ((n - 1) / mp.mpf(2)) / mp.gamma((n - 1) / mp.mpf(2)) if n > 1 else None
    if n == 1:
        exact = abs(r - rho) ** (2 * sigma - 1) + (r + rho) ** (2 * sigma - 1)
    else:
        exact = surf * mp.quad(lambda t: (r * r + rho * rho - 2 * r * rho * mp.cos(t)) ** (sigma - n / 2.0)
                               * mp.sin(t) ** (n - 2), [0, mp.pi])
    assert float(L.spherical_average(n, sigma, r, rho)) == pytest.approx(float(exact), rel=1e-10)


def test_radial_crosscheck_constant():
    c, dev = L.radial_crosscheck(3, 0.5, F.indicator(0.0, 1.0), np.geomspace(0.2, 5, 4))
    assert dev < 1e-8
    assert c == pytest.approx(L.radial_constant(3, 0.5), rel=1e-8)
    with pytest.raises(ValueError):
        L.radial_crosscheck(2, 1.0, F.indicator(0.0, 1.0), [1.0])


def test_radial_predicate_matches_modified_at_half_integer_order():
    # alpha = n/2 - 1 turns the modified conditions into the radial ones
    for n in (1, 2, 3, 4):
        for e in (ExponentQuad(2, 4, "1/4", "1/4"), ExponentQuad(2, 2, "1/2", "1/2"), ExponentQuad(1, 2, 0, "1/2")):
            sigma = Fraction(n, 8)
            assert L.radial_bounded(n, sigma, e).bounded == \
                L.riesz_bounded("modified", Fraction(n, 2) - 1, sigma, e, use_e_prime=True).bounded
