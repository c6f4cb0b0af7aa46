"""Complex log-gamma, digamma and trigamma, Bernoulli numbers, Euler's constant.

All functions accept a scalar or an array.  Scalars come back as Python
``complex``; arrays as ``complex128`` arrays of the same shape.  Evaluating at
a non-positive integer raises :class:`~relzeta.errors.PoleError`.
"""
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DomainError, PoleError

EULER_GAMMA = 0.57721566490153286060651209008240243
"""Euler's constant C = -psi(1)."""

BERNOULLI_MAX = 30


def _apply(kernel, z, name):
    scalar = np.ndim(z) == 0
    out = kernel(np.atleast_1d(np.asarray(z, dtype=np.complex128)))
    if np.isnan(out).any():
        arr = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        bad = arr[np.isnan(out)]
        raise PoleError(f"{name} has a pole at z={bad[0]!r}")
    return complex(out[0]) if scalar else out.reshape(np.shape(z))


def log_gamma(z):
    """Principal branch of log Gamma(z).

    Continuous on the plane cut along the negative real axis; the imaginary
    part is not reduced modulo 2 pi, so ``log_gamma(z + 1) = log_gamma(z) + log(z)``
    holds exactly off the cut.
    """
    return _apply(_kernels.loggamma, z, "log_gamma")


def digamma(z):
    """psi(z) = d/dz log Gamma(z)."""
    return _apply(_kernels.digamma, z, "digamma")


def trigamma(z):
    """psi'(z); satisfies psi'(z + 1) = psi'(z) - 1/z**2."""
    return _apply(_kernels.trigamma, z, "trigamma")


@lru_cache(maxsize=None)
def _bernoulli_table():
    # Akiyama-Tanigawa; B_1 = +1/2 convention is irrelevant for even n
    n_max = BERNOULLI_MAX
    table = []
    a = [Fraction(0)] * (n_max + 1)
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        table.append(a[0])
    return tuple(table)


def bernoulli_exact(n):
    """Bernoulli number B_n as a :class:`fractions.Fraction` (n even, 2 <= n <= 30)."""
    if not isinstance(n, (int, np.integer)) or n < 2 or n % 2 or n > BERNOULLI_MAX:
        raise DomainError(f"bernoulli(n) needs an even integer 2 <= n <= {BERNOULLI_MAX}, got {n!r}")
    return _bernoulli_table()[int(n)]


def bernoulli(n):
    """Bernoulli number B_n rounded to double."""
    return float(bernoulli_exact(n))
