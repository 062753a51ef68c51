import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hankelpot import functions as F
from hankelpot.functions import PowerBehavior, SampledFunction, WeightedMeasure
from hankelpot.operators import (
    apply_potential,
    apply_potential_values,
    hankel_transform,
    inversion_check,
    mult_convolution,
    negative_power_check,
    potential_divergence,
    split_operators,
    weak_quasinorm,
    weighted_norm,
)
from hankelpot.potentials import riesz_c
from hankelpot.settings import PotentialParams


def test_dunkl_and_modified_order_minus_half_indicator():
    s = 0.25
    c = riesz_c(s)
    f = F.indicator(0.0, 1.0)
    d = apply_potential("dunkl", PotentialParams(-0.5, s), f, 4.0).value
    assert d == pytest.approx(2 * c * (2 - math.sqrt(3)), rel=1e-9)
    m = apply_potential("modified", PotentialParams(-0.5, s), f, 4.0).value
    assert m == pytest.approx(2 * c * (2 - math.sqrt(3)) + 2 * c * (math.sqrt(5) - 2), rel=1e-9)


def test_potential_next_to_support_edge():
    s, x = 0.25, 1 - 1e-9
    c = riesz_c(s)
    exact = c * (2 * math.sqrt(x) + 2 * math.sqrt(1 - x) + 2 * (math.sqrt(x + 1) - math.sqrt(x)))
    got = apply_potential("modified", PotentialParams(-0.5, s), F.indicator(0.0, 1.0), x).value
    assert got == pytest.approx(exact, rel=1e-10)


def test_nonmodified_half_order():
    s, x = 0.3, 0.7
    e = 2 * s
    anti = lambda y: ((y - x) ** e - (x + y) ** e) / e  # noqa: E731
    exact = riesz_c(s) * (anti(2.0) - anti(1.0))
    got = apply_potential("nonmodified", PotentialParams(0.5, s), F.indicator(1.0, 2.0), x).value
    assert got == pytest.approx(exact, rel=1e-9)


def test_divergence_is_decided_analytically():
    p = PotentialParams(0.0, 0.25)
    # y^{-2} near 0 against d mu = y dy is not integrable
    g = F.power_function(-2.0, 0.0, 1.0)
    assert potential_divergence("modified", p, g, 2.0)
    assert math.isinf(apply_potential("modified", p, g, 2.0).value)
    signed = g.scaled(-1.0)
    assert apply_potential("modified", p, signed, 2.0).status in {"infinite", "not-in-domain"}
    mixed = SampledFunction(evaluator=lambda y: np.sin(1 / y) * y**-2.0, support=(0.0, 1.0),
                            singular_exponents=(PowerBehavior(-2.0), None), nonnegative=False)
    assert apply_potential("modified", p, mixed, 2.0).status == "not-in-domain"


def test_values_vector_matches_pointwise():
    p = PotentialParams(0.5, 0.6, "bessel")
    f = F.bump(1.0, 3.0)
    xs = [0.5, 2.0, 7.0]
    vals, errs = apply_potential_values("modified", p, f, xs)
    for x, v in zip(xs, vals):
        assert v == pytest.approx(apply_potential("modified", p, f, x).value, rel=1e-12)
    assert np.all(np.asarray(errs) >= 0)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.5])
def test_hankel_transform_of_gaussian(alpha):
    eps = 0.7
    g = F.gaussian(eps)
    for x in (0.3, 1.0, 2.5):
        got = hankel_transform("modified", alpha, g, x)
        assert got == pytest.approx((2 * eps) ** (-(alpha + 1)) * math.exp(-x * x / (4 * eps)), rel=1e-9)


def test_dunkl_transform_is_complex_and_conjugate_symmetric():
    g = F.bump(-1.0, 2.0)
    a = hankel_transform("dunkl", 0.3, g, 1.2)
    b = hankel_transform("dunkl", 0.3, g, -1.2)
    assert isinstance(a, complex)
    # g is real, so the transform at -x is the conjugate
    assert b == pytest.approx(a.conjugate(), rel=1e-10)


def test_negative_power_identity_small():
    err = negative_power_check(0.0, 0.2, F.bump(1.0, 2.0), np.geomspace(0.3, 3.0, 4))
    assert err <= 1e-5


@given(st.floats(-0.9, 3.0), st.floats(0.1, 4.0), st.floats(1.0, 5.0))
def test_power_function_norms(alpha, exponent_shift, p):
    # || y^e ||_{L^p(0,1; d mu)} = (1 / (e p + 2 alpha + 2))^{1/p} when e p + 2 alpha + 2 > 0
    k = 2 * alpha + 2
    e = -k / p + exponent_shift / p
    f = F.power_function(e, 0.0, 1.0)
    got = weighted_norm(f, p, WeightedMeasure("modified", alpha)).value
    assert got == pytest.approx((1.0 / (e * p + k)) ** (1.0 / p), rel=1e-8)
    bad = F.power_function(-k / p, 0.0, 1.0)
    assert math.isinf(weighted_norm(bad, p, WeightedMeasure("modified", alpha)).value)


def test_sup_norm_and_weak_quasinorm():
    assert weighted_norm(F.bump(0.0, 2.0, 3.0), math.inf, WeightedMeasure()).value == pytest.approx(3 * math.exp(-1),
                                                                                                    rel=1e-6)
    alpha, q = 0.5, 2.0
    n = 2 * alpha + 2
    f = F.power_function(-n / q, 1e-6, 1e6)
    assert weak_quasinorm(f, q, WeightedMeasure("modified", alpha)) == pytest.approx(n ** (-1 / q), rel=1e-2)


def test_split_operators_closed_forms():
    f = F.indicator(0.0, 1.0)
    s = split_operators(0.0, 0.25, f, 2.0)
    assert s.h0.value == pytest.approx(2**-1.5 / 2, rel=1e-12)
    assert s.hinf.value == 0.0
    s = split_operators(0.0, 0.25, f, 0.5)
    assert s.t_op.value == pytest.approx(1 + math.sqrt(2), rel=1e-10)
    assert s.hinf.value == pytest.approx(2 * (1 - math.sqrt(0.5)), rel=1e-10)
    assert s.s_op.value == 0.0
    s = split_operators(0.0, 0.5, f, 0.5)
    assert s.t_op.value == 0.0 and s.s_op.value > 0


@pytest.mark.parametrize("sigma", [0.25, 0.5, 0.8])
def test_split_sum_is_comparable_with_potential(sigma):
    alpha = 0.3
    p = PotentialParams(alpha, sigma)
    ratios = []
    for f in (F.indicator(0.0, 1.0), F.bump(1.0, 4.0), F.power_function(-0.5, 0.0, 2.0)):
        for x in (0.05, 0.7, 1.0 + 1e-3, 3.0, 40.0):
            ratios.append(apply_potential("modified", p, f, x).value / split_operators(alpha, sigma, f, x).total)
    assert 0 < min(ratios) and max(ratios) / min(ratios) < 30


def test_young_inequality_on_multiplicative_group():
    Fn = F.bump(0.5, 3.0)
    K = F.bump(0.8, 1.5)
    lhs, rhs = mult_convolution(Fn, K, 4.0, 2.0, 4.0 / 3.0)
    assert 0 < lhs <= rhs
    with pytest.raises(ValueError):
        mult_convolution(Fn, K, 2.0, 2.0, 2.0)
    # an indicator convolved with a point-mass-like narrow kernel keeps its norm
    one, bound = mult_convolution(F.indicator(1.0, math.e), F.indicator(1.0, math.e), math.inf, 1.0, math.inf)
    assert one == pytest.approx(1.0, rel=1e-9) and bound == pytest.approx(1.0, rel=1e-12)


def test_transform_warns_at_high_frequency():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        hankel_transform("modified", 0.0, F.indicator(0.0, 1.0), 2e4)
    assert any("accur" in str(m.message).lower() or m.category.__name__ == "AccuracyWarning" for m in w)


def test_inversion_and_isometry():
    g = F.bump(0.5, 3.0)
    inversion, isometry = inversion_check(1.0, g, [1.0, 2.0])
    assert inversion < 1e-7 and isometry < 1e-9
    with pytest.raises(ValueError):
        inversion_check(0.0, F.bump(0.0, 1.0), [0.5])
