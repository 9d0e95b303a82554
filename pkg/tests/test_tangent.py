import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobiflow.errors import DepthMismatch, EvaluationError
from jacobiflow.tangent import (
    Tangent,
    as_array,
    cos,
    depth_of,
    exp,
    join,
    lift_constant,
    log,
    powi,
    primal,
    seed,
    sin,
    split,
    sqrt,
)

finite = st.floats(-3, 3, allow_nan=False)


def slots(x):
    if isinstance(x, Tangent):
        return slots(x.value) + slots(x.deriv)
    return [x]


def test_lift_constant():
    c = lift_constant(5, 1)
    assert (c.value, c.deriv) == (5.0, 0.0)
    assert slots(lift_constant(0, 2)) == [0.0] * 4
    assert depth_of(lift_constant(1.5, 3)) == 3
    assert lift_constant(2, 0) == 2.0


@pytest.mark.parametrize("depth", [-1, 4])
def test_lift_constant_depth_range(depth):
    with pytest.raises(ValueError):
        lift_constant(1.0, depth)


@given(st.floats(-10, 10), finite, finite)
def test_constant_scales_derivative(c, v, d):
    y = lift_constant(c, 1) * seed(v, d)
    assert y.deriv == c * d


def test_seed_through_maps():
    y = seed(2, 1) * seed(2, 1)
    assert (y.value, y.deriv) == (4.0, 4.0)
    s = sin(seed(0, 1))
    assert (s.value, s.deriv) == (0.0, 1.0)
    x = seed(1, 3)
    cube = x * x * x
    assert (cube.value, cube.deriv) == (1.0, 9.0)


def test_product_rule_example():
    p = Tangent(2, 1) * Tangent(3, 0)
    assert (p.value, p.deriv) == (6.0, 3.0)


def test_second_derivative_of_sin():
    x = Tangent(Tangent(0.0, 1.0), Tangent(1.0, 0.0))
    assert sin(x).deriv.deriv == 0.0
    x = Tangent(Tangent(0.7, 1.0), Tangent(1.0, 0.0))
    assert sin(x).deriv.deriv == pytest.approx(-math.sin(0.7), abs=1e-15)


def test_exp_at_one():
    y = exp(seed(1, 1))
    assert y.value == math.e and y.deriv == math.e


def test_mixed_depths_rejected():
    with pytest.raises(DepthMismatch):
        Tangent(1.0, 0.0) + Tangent(Tangent(1.0, 0.0), Tangent(0.0, 0.0))
    with pytest.raises(DepthMismatch):
        Tangent(Tangent(1.0, 0.0), Tangent(Tangent(0.0, 0.0), 0.0))


def test_division_by_zero_reports_level():
    with pytest.raises(EvaluationError) as info:
        seed(1.0, 1.0) / seed(0.0, 1.0)
    assert info.value.level == 1
    with pytest.raises(EvaluationError):
        sqrt(seed(-1.0, 1.0))
    with pytest.raises(EvaluationError):
        log(seed(0.0, 1.0))


@pytest.mark.parametrize(
    "f, df",
    [
        (sin, math.cos),
        (cos, lambda x: -math.sin(x)),
        (exp, math.exp),
        (lambda x: sqrt(x * x + 1.0), lambda x: x / math.sqrt(x * x + 1.0)),
        (lambda x: powi(x, -3), lambda x: -3.0 * x**-4),
        (lambda x: 1.0 / (2.0 + sin(x)), lambda x: -math.cos(x) / (2.0 + math.sin(x)) ** 2),
        (lambda x: log(x * x + 0.5), lambda x: 2.0 * x / (x * x + 0.5)),
    ],
)
@given(x=st.floats(0.2, 2.5))
def test_derivative_matches_analytic(f, df, x):
    assert f(seed(x, 1.0)).deriv == pytest.approx(df(x), rel=1e-13, abs=1e-14)


def model_fn(x):
    return sin(x) * exp(0.3 * x) / (1.5 + x * x) + powi(x, 3)


@given(st.floats(-2, 2))
@settings(max_examples=50)
def test_central_difference(x):
    h = 1e-5
    fd = (model_fn(x + h) - model_fn(x - h)) / (2 * h)
    d = model_fn(seed(x, 1.0)).deriv
    assert abs(d - fd) <= 1e-8 * max(1.0, abs(d))


@given(finite, finite, finite, finite, finite)
def test_pushforward_linearity(x, a, b, d1, d2):
    D1 = model_fn(seed(x, d1)).deriv
    D2 = model_fn(seed(x, d2)).deriv
    D = model_fn(seed(x, a * d1 + b * d2)).deriv
    assert D == pytest.approx(a * D1 + b * D2, rel=1e-13, abs=1e-12)


@given(finite, finite)
def test_mixed_partial_symmetry(s0, t0):
    def f(t, s):
        return sin(t * s) + exp(0.5 * t) * s * s

    st_ = f(Tangent(Tangent(t0, 1.0), Tangent(0.0, 0.0)), Tangent(Tangent(s0, 0.0), Tangent(1.0, 0.0)))
    ts_ = f(Tangent(Tangent(t0, 0.0), Tangent(1.0, 0.0)), Tangent(Tangent(s0, 1.0), Tangent(0.0, 0.0)))
    a, b = st_.deriv.deriv, ts_.deriv.deriv
    assert abs(a - b) <= 4 * np.spacing(max(abs(a), 1.0))


@given(finite, finite, finite)
def test_leibniz_is_exact(x, y, d):
    a, b = seed(x, d), seed(y, 2 * d)
    assert (a * b).deriv == a.deriv * b.value + a.value * b.deriv


def test_third_derivative():
    x = Tangent(Tangent(Tangent(0.3, 1.0), Tangent(1.0, 0.0)), Tangent(Tangent(1.0, 0.0), Tangent(0.0, 0.0)))
    assert depth_of(x) == 3
    assert sin(x).deriv.deriv.deriv == pytest.approx(-math.cos(0.3), abs=1e-15)
    assert primal(sin(x)) == math.sin(0.3)


def test_array_helpers():
    arr = join([1.0, 2.0], [3.0, 4.0])
    v, d = split(arr)
    assert v.tolist() == [1.0, 2.0] and d.tolist() == [3.0, 4.0]
    assert as_array([1, 2]).dtype == float
    assert as_array([seed(1, 0), 2.0]).dtype == object
    v, d = split(np.array([seed(1.0, 5.0), 2.0], dtype=object))
    assert d.tolist() == [5.0, 0.0]


def test_numpy_scalars_defer():
    y = np.float64(2.0) * seed(3.0, 1.0)
    assert isinstance(y, Tangent) and y.deriv == 2.0
