import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relzeta import specfun
from relzeta.errors import ConvergenceError, DivergenceError, DomainError, BranchError
from relzeta.quadrature import (AccuracyBudget, TailModel, hankel_heat_trace, integrate_finite,
                                integrate_tail, integrate_vertical_line)


def sin2(z):
    return np.pi ** 2 / np.sin(np.pi * z) ** 2


# ---------------------------------------------------------------------------
# finite intervals

def test_finite_examples():
    assert abs(integrate_finite(lambda v: v, 0, 1).value - 0.5) < 1e-14
    assert abs(integrate_finite(np.log, 0, 1, singularity="log").value + 1) < 1e-10
    val = integrate_finite(lambda v: v * np.exp(-v * v), 0, 1).value
    assert abs(val - (1 - math.exp(-1)) / 2) < 1e-14


def test_algebraic_singularity():
    r = integrate_finite(lambda v: v ** -0.5, 0, 1, tol=1e-12, singularity=-0.5)
    assert abs(r.value - 2) < 1e-11


def test_finite_rejects_bad_input():
    with pytest.raises(DomainError):
        integrate_finite(np.sin, 1, 0)
    with pytest.raises(DomainError):
        integrate_finite(np.sin, 0, 1, singularity=-1.5)
    with pytest.raises(DomainError):
        AccuracyBudget(0.0, 0.0)


def test_depth_limit_reports_best_estimate():
    with pytest.raises(ConvergenceError) as info:
        integrate_finite(lambda v: np.sign(np.sin(1 / v)) / v, 1e-9, 1.0, tol=1e-14, max_depth=8)
    assert info.value.estimate is not None


def test_relative_tolerance():
    r = integrate_finite(np.exp, 0, 30, tol=AccuracyBudget(abs_tol=1e-300, rel_tol=1e-12))
    assert abs(r.value / math.expm1(30) - 1) < 1e-12


SUITE = [
    (lambda x: x ** 2, 0, 1, 1 / 3, None),
    (np.exp, 0, 1, math.e - 1, None),
    (np.sin, 0, math.pi, 2.0, None),
    (np.cos, 0, 1, math.sin(1), None),
    (lambda x: 1 / (1 + x * x), 0, 1, math.pi / 4, None),
    (np.sqrt, 0, 1, 2 / 3, None),
    (lambda x: np.log1p(x), 0, 1, 2 * math.log(2) - 1, None),
    (lambda x: x * np.exp(-x), 0, 10, 1 - 11 * math.exp(-10), None),
    (lambda x: 1 / x, 1, math.e ** 3, 3.0, None),
    (lambda x: x ** 0.25, 0, 1, 0.8, None),
    (lambda x: np.sin(10 * x) ** 2, 0, math.pi, math.pi / 2, None),
    (lambda x: 1 / (1 + 25 * x * x), -1, 1, 0.4 * math.atan(5), None),
    (lambda x: np.abs(x - 0.3), 0, 1, 0.29, None),
    (np.cosh, -2, 2, 2 * math.sinh(2), None),
    (lambda x: x ** 7 - 3 * x, 0, 2, 26.0, None),
    (lambda x: 1 / np.sqrt(1 - x * x), 0, 0.99, math.asin(0.99), None),
    (lambda x: np.exp(np.sin(x)) * np.cos(x), 0, 3, math.exp(math.sin(3)) - 1, None),
    (np.tan, 0, 1.5, -math.log(math.cos(1.5)), None),
    (lambda x: x ** -0.5, 0, 1, 2.0, -0.5),
    (lambda x: np.exp(-x) * np.cos(5 * x), 0, 4, (1 - math.exp(-4) * (math.cos(20) - 5 * math.sin(20))) / 26,
     None),
]


@pytest.mark.parametrize("tol", [1e-4, 1e-6, 1e-8, 1e-10])
def test_error_estimates_conservative(tol):
    assert len(SUITE) == 20
    ratios = []
    for f, a, b, exact, sing in SUITE:
        r = integrate_finite(f, a, b, tol=tol, singularity=sing)
        true = abs(r.value - exact)
        assert true <= 10 * max(tol, r.error)
        ratios.append(true / r.error if r.error > 0 else (0.0 if true == 0 else np.inf))
    ratios = np.array(ratios)
    assert np.mean(ratios <= 1) >= 0.95
    assert ratios.max() <= 10


# ---------------------------------------------------------------------------
# semi-infinite intervals

def test_tail_examples():
    r = integrate_tail(lambda v: v ** -2 + v ** -4, 1.0, TailModel(((-2, 0, 1.0),)), tol=1e-12)
    assert abs(r.value - 1 / 3) < 1e-11
    r = integrate_tail(lambda v: v ** -2 * np.log(v), 1.0, TailModel(((-2, 1, 1.0),)), tol=1e-12)
    assert abs(r.value) < 1e-12
    r = integrate_tail(lambda v: v ** -3.0, 1.0, tol=1e-12)
    assert abs(r.value - 0.5) < 1e-11


@pytest.mark.parametrize("f, expo", [(lambda v: 1 / v, -1.0), (lambda v: np.log(v) / v, -1.0),
                                     (lambda v: v ** -0.8, -0.8)])
def test_tail_divergence_detected(f, expo):
    with pytest.raises(DivergenceError) as info:
        integrate_tail(f, 1.0, tol=1e-10)
    assert abs(info.value.exponent - expo) < 0.1


def test_tail_model_validation():
    with pytest.raises(DomainError):
        TailModel(((-2, 0, 1.0), (-1, 0, 1.0)))
    with pytest.raises(DomainError):
        TailModel(((-2, 0, 1.0), (-2, 0, 3.0)))
    with pytest.raises(DomainError):
        integrate_tail(lambda v: v ** -2, 0.0)


@given(st.floats(1.3, 4.0), st.floats(0.5, 3.0))
def test_tail_matches_inverted_finite(p, c):
    def f(v):
        return c * v ** -p / (1 + np.exp(-v))

    direct = integrate_tail(f, 1.0, tol=1e-12).value
    # v = 1/u on (0, 1]; the Jacobian is u^-2
    inverted = integrate_finite(lambda u: f(1 / u) / u ** 2, 0.0, 1.0, tol=1e-12, singularity=p - 2).value
    assert abs(direct - inverted) < 1e-10


# ---------------------------------------------------------------------------
# contour integrals

def test_vertical_line_examples():
    assert abs(integrate_vertical_line(sin2, 0.5).value - 1) < 1e-10
    v = integrate_vertical_line(lambda z: sin2(z) / (z + 1), 0.5).value
    assert abs(v - (math.pi ** 2 / 6 - 1)) < 1e-10
    v = integrate_vertical_line(lambda z: sin2(z) / (z + 2), 0.5).value
    assert abs(v - (specfun.trigamma(2.0) - 0.25)) < 1e-10


@pytest.mark.parametrize("a", [1.0, 1.5, 2.0, 3.25])
def test_vertical_line_independent_of_x0(a):
    vals = [integrate_vertical_line(lambda z: sin2(z) / (z + a), x0).value for x0 in (0.3, 0.5, 0.7)]
    assert max(vals) - min(vals) < 1e-9
    assert abs(vals[1] - (specfun.trigamma(a) - 1 / a ** 2)) < 1e-9


def test_vertical_line_requires_decay():
    with pytest.raises(DomainError):
        integrate_vertical_line(lambda z: 1 / (1 + z * z), 0.5)


@pytest.mark.parametrize("mu, t", [(-0.5, 1.0), (-0.2, 2.0), (-1.5, 0.5)])
def test_hankel_single_pole(mu, t):
    # r = 1/(mu - lambda): the counter-clockwise contour picks up -exp(-mu t)
    res = hankel_heat_trace(lambda k: 1 / (mu + k * k), t, c0=mu - 1.0, d=1.0)
    assert abs(res.value + math.exp(-mu * t)) < 1e-10
    assert res.imag_residual < 1e-10


def test_hankel_zero():
    res = hankel_heat_trace(lambda k: np.zeros_like(k), 1.0)
    assert res.value == 0.0


def test_hankel_pole_outside_contour_ignored():
    # pole at lambda = -3 lies left of the default crossing point -1/t
    res = hankel_heat_trace(lambda k: 1 / (-3.0 + k * k), 1.0)
    assert abs(res.value) < 1e-10


def test_hankel_branch_error():
    # a trace that is not conjugate-symmetric leaves an imaginary residual
    with pytest.raises(BranchError):
        hankel_heat_trace(lambda k: 1j / (1 + k * k), 1.0, c0=-2.0)
