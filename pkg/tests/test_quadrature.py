import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hankelpot.lineint import Singularity, Tail, line_integral, local_convergent, tail_convergent
from hankelpot.quadrature import integrate


def _f(fun):
    return lambda y, dl, dr, r: fun(y)


def test_tanh_sinh_smooth_and_endpoint_singular():
    r = integrate(_f(np.exp), [0.0], [1.0])
    assert r.value[0] == pytest.approx(math.e - 1, rel=1e-14)
    r = integrate(lambda y, dl, dr, r: dl ** -0.5, [0.0], [1.0], left_power=[-0.5])
    assert r.value[0] == pytest.approx(2.0, rel=1e-12)


def test_batched_rows_are_independent():
    r = integrate(lambda y, dl, dr, rows: np.cos(y), [0.0, 0.0, 1.0], [1.0, 2.0, 3.0])
    np.testing.assert_allclose(r.value, [math.sin(1), math.sin(2), math.sin(3) - math.sin(1)], rtol=1e-13)


def test_line_integral_interior_singularity_uses_exact_offset():
    # int_0^2 |y - 1|^{-1/2} dy = 4
    res = line_integral(lambda y, a, d, o: np.where(np.isnan(a), 0, 1.0) * np.abs(o) ** -0.5, 0.0, 2.0,
                        singularities=[Singularity(1.0, -0.5)])
    assert res.value == pytest.approx(4.0, rel=1e-12)


def test_line_integral_log_borderline():
    # int_0^1 y^{-1} log(2/y)^{-2} dy = 1/log 2
    res = line_integral(lambda y, a, d, o: 1.0 / (o * np.log(2.0 / o) ** 2), 0.0, 1.0,
                        singularities=[Singularity(0.0, -1.0, 2.0)])
    assert res.value == pytest.approx(1.0 / math.log(2.0), rel=1e-10)


def test_line_integral_infinite_tails():
    res = line_integral(lambda y, a, d, o: np.exp(-y * y), -math.inf, math.inf, tails=(Tail(-math.inf), Tail(-math.inf)))
    assert res.value == pytest.approx(math.sqrt(math.pi), rel=1e-12)
    res = line_integral(lambda y, a, d, o: y ** -1.5, 1.0, math.inf, tails=(None, Tail(-1.5)))
    assert res.value == pytest.approx(2.0, rel=1e-10)


def test_convergence_rules():
    assert local_convergent(-0.5) and not local_convergent(-1.0) and local_convergent(-1.0, 1.5)
    assert not local_convergent(-1.0, 1.0)
    assert tail_convergent(-1.5) and not tail_convergent(-1.0) and tail_convergent(-1.0, 2.0)


@given(st.floats(-0.95, 3.0), st.floats(0.1, 10.0))
def test_power_integrals(beta, length):
    res = integrate(lambda y, dl, dr, r: dl**beta, [0.0], [length], left_power=[min(beta, 0.0)])
    exact = length ** (beta + 1) / (beta + 1)
    assert res.value[0] == pytest.approx(exact, rel=1e-9)
