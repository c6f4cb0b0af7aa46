import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relzeta import specfun
from relzeta._kernels import digamma_numpy, trigamma_numpy
from relzeta.errors import DomainError, PoleError

C = specfun.EULER_GAMMA


def euler_constant_oracle(n=10_000):
    # H_n - log n with the Euler-Maclaurin correction terms
    h = math.fsum(1.0 / k for k in range(1, n + 1))
    return h - math.log(n) - 1 / (2 * n) + 1 / (12 * n ** 2) - 1 / (120 * n ** 4)


def zeta2_oracle(n=10_000):
    s = math.fsum(1.0 / k ** 2 for k in range(1, n + 1))
    return s + 1 / n - 1 / (2 * n ** 2) + 1 / (6 * n ** 3)


finite_re = st.floats(0.1, 50.0)
finite_im = st.floats(-50.0, 50.0)


def test_euler_constant_matches_oracle():
    assert abs(C - euler_constant_oracle()) < 1e-13


@pytest.mark.parametrize("z, expected", [(1.0, 0.0), (2.0, 0.0), (0.5, 0.5 * math.log(math.pi))])
def test_log_gamma_examples(z, expected):
    # a few ulp from the summed logs of the upward recurrence
    assert abs(specfun.log_gamma(z) - expected) < 4e-15


def test_log_gamma_half_vs_mpmath():
    assert abs(specfun.log_gamma(0.5) - float(mpmath.loggamma(0.5))) < 4e-15


def test_digamma_examples():
    assert abs(specfun.digamma(1.0) + euler_constant_oracle()) < 1e-13
    assert abs(specfun.digamma(2.0) - (1 - C)) < 1e-15
    z = 1 + 1j
    assert abs(specfun.digamma(z + 1) - specfun.digamma(z) - 1 / z) < 1e-12


def test_trigamma_examples():
    assert abs(specfun.trigamma(1.0) - zeta2_oracle()) < 1e-13
    assert abs(specfun.trigamma(1.0) - math.pi ** 2 / 6) < 1e-15
    assert abs(specfun.trigamma(2.0) - (math.pi ** 2 / 6 - 1)) < 1e-15


@pytest.mark.parametrize("func", [specfun.log_gamma, specfun.digamma, specfun.trigamma])
@pytest.mark.parametrize("z", [0.0, -1.0, -2.0, -7.0])
def test_poles_raise(func, z):
    with pytest.raises(PoleError):
        func(z)


def test_pole_inside_array_raises():
    with pytest.raises(PoleError):
        specfun.digamma(np.array([1.0, -3.0, 2.5]))


def test_array_shape_preserved():
    z = np.linspace(0.5, 3.0, 12).reshape(3, 4) + 0.1j
    assert specfun.digamma(z).shape == (3, 4)
    assert isinstance(specfun.digamma(1.5), complex)


def test_bernoulli_values():
    assert specfun.bernoulli(2) == 1 / 6
    assert specfun.bernoulli(4) == -1 / 30
    assert specfun.bernoulli(6) == 1 / 42
    for n in range(2, 31, 2):
        assert specfun.bernoulli(n) == float(mpmath.bernoulli(n))


@pytest.mark.parametrize("n", [0, 1, 3, 32, 2.0])
def test_bernoulli_out_of_range(n):
    with pytest.raises(DomainError):
        specfun.bernoulli(n)


def test_recurrences_random_half_plane():
    rng = np.random.default_rng(7)
    z = rng.uniform(0.1, 50.0, 1000) + 1j * rng.uniform(-50.0, 50.0, 1000)
    r1 = np.abs(specfun.digamma(z + 1) - specfun.digamma(z) - 1 / z)
    r2 = np.abs(specfun.trigamma(z + 1) - specfun.trigamma(z) + 1 / z ** 2)
    assert r1.max() < 1e-12
    assert r2.max() < 1e-12


@given(finite_re, finite_im)
def test_log_gamma_recurrence(x, y):
    z = complex(x, y)
    d = specfun.log_gamma(z + 1) - specfun.log_gamma(z) - cmath.log(z)
    assert abs(d.real) < 1e-11 * max(1.0, abs(specfun.log_gamma(z)))
    k = d.imag / (2 * math.pi)
    assert abs(k - round(k)) < 1e-9


@given(finite_re, finite_im)
def test_conjugate_symmetry_exact(x, y):
    z = complex(x, y)
    for f in (specfun.log_gamma, specfun.digamma, specfun.trigamma):
        assert f(z.conjugate()) == f(z).conjugate()


@given(st.floats(-30.0, 30.0), st.floats(-30.0, 30.0))
def test_against_mpmath(x, y):
    z = complex(x, y)
    if abs(z - round(x)) < 1e-3 and round(x) <= 0:
        return
    ref_psi = complex(mpmath.digamma(z))
    ref_tri = complex(mpmath.psi(1, z))
    assert abs(specfun.digamma(z) - ref_psi) <= 1e-12 * max(1.0, abs(ref_psi))
    assert abs(specfun.trigamma(z) - ref_tri) <= 1e-12 * max(1.0, abs(ref_tri))
    if x > 0:
        ref_lg = complex(mpmath.loggamma(z))
        assert abs(specfun.log_gamma(z) - ref_lg) <= 1e-12 * max(1.0, abs(ref_lg))


def test_regime_overlap_annulus():
    # two recurrence thresholds put |z| in [4, 8] in different regimes
    rng = np.random.default_rng(3)
    r = rng.uniform(4.0, 8.0, 500)
    t = rng.uniform(-np.pi / 2, np.pi / 2, 500)
    z = r * np.exp(1j * t)
    assert np.abs(digamma_numpy(z, 10.0) - digamma_numpy(z, 20.0)).max() < 1e-12
    assert np.abs(trigamma_numpy(z, 10.0) - trigamma_numpy(z, 20.0)).max() < 1e-12


def test_small_z_taylor_series():
    from scipy.special import zeta
    z = np.array([0.1, -0.2 + 0.1j, 0.3j, 0.05 - 0.25j])
    series = -C + sum((-1) ** k * zeta(k) * z ** (k - 1) for k in range(2, 60))
    assert np.abs(specfun.digamma(1 + z) - series).max() < 1e-12


def test_large_z_asymptotic_series():
    z = np.array([200.0, 150 + 80j, 300j + 5])
    asym = np.log(z) + 1 / (2 * z) - 1 / (12 * z ** 2) + 1 / (120 * z ** 4) - 1 / (252 * z ** 6)
    assert np.abs(specfun.digamma(1 + z) - asym).max() < 1e-14
