"""Hot kernels: complex log-gamma, digamma and trigamma on arrays.

Both paths use the same algorithm: upward recurrence until ``Re w >= 10``,
then the Bernoulli asymptotic series truncated after ``B_16``.  The numba path
loops over scalars; the numpy path shifts whole arrays under a mask.
"""
import cmath
import math

import numpy as np

from ._backend import HAVE_NUMBA, USE_NUMBA, njit

SHIFT_THRESHOLD = 10.0

# B_2 .. B_16
_B2K = (1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
        -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0)

# psi(w) ~ log w - 1/(2w) - sum_k B_2k / (2k) w^-2k
_PSI_C = tuple(b / (2.0 * k) for k, b in enumerate(_B2K, start=1))
# psi'(w) ~ 1/w + 1/(2w^2) + sum_k B_2k w^-(2k+1)
_PSI1_C = _B2K
# log Gamma(w) ~ (w - 1/2) log w - w + log(2 pi)/2 + sum_k B_2k / (2k (2k-1)) w^(1-2k)
_LGAM_C = tuple(b / (2.0 * k * (2.0 * k - 1.0)) for k, b in enumerate(_B2K, start=1))
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


# ---------------------------------------------------------------------------
# scalar kernels (numba-compiled when available)

@njit
def _is_pole(z):
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


@njit
def _horner(coeffs, u):
    # sum_{k>=1} coeffs[k-1] u^k
    acc = 0j
    for i in range(len(coeffs) - 1, -1, -1):
        acc = acc * u + coeffs[i]
    return acc * u


@njit
def digamma_scalar(z, threshold):
    if _is_pole(z):
        return complex(np.nan, np.nan)
    acc = 0j
    w = z
    while w.real < threshold:
        acc -= 1.0 / w
        w += 1.0
    inv = 1.0 / w
    return acc + cmath.log(w) - 0.5 * inv - _horner(_PSI_C, inv * inv)


@njit
def trigamma_scalar(z, threshold):
    if _is_pole(z):
        return complex(np.nan, np.nan)
    acc = 0j
    w = z
    while w.real < threshold:
        acc += 1.0 / (w * w)
        w += 1.0
    inv = 1.0 / w
    return acc + inv + 0.5 * inv * inv + inv * _horner(_PSI1_C, inv * inv)


@njit
def loggamma_scalar(z, threshold):
    if _is_pole(z):
        return complex(np.nan, np.nan)
    acc = 0j
    w = z
    while w.real < threshold:
        acc -= cmath.log(w)
        w += 1.0
    inv = 1.0 / w
    return (acc + (w - 0.5) * cmath.log(w) - w + _HALF_LOG_2PI
            + w * _horner(_LGAM_C, inv * inv))


@njit
def _digamma_loop(z, threshold, out):
    for i in range(z.size):
        out[i] = digamma_scalar(z[i], threshold)


@njit
def _trigamma_loop(z, threshold, out):
    for i in range(z.size):
        out[i] = trigamma_scalar(z[i], threshold)


@njit
def _loggamma_loop(z, threshold, out):
    for i in range(z.size):
        out[i] = loggamma_scalar(z[i], threshold)


def _run_loop(loop, z, threshold):
    flat = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    out = np.empty_like(flat)
    loop(flat, float(threshold), out)
    return out.reshape(np.shape(z))


def digamma_numba(z, threshold=SHIFT_THRESHOLD):
    return _run_loop(_digamma_loop, z, threshold)


def trigamma_numba(z, threshold=SHIFT_THRESHOLD):
    return _run_loop(_trigamma_loop, z, threshold)


def loggamma_numba(z, threshold=SHIFT_THRESHOLD):
    return _run_loop(_loggamma_loop, z, threshold)


# ---------------------------------------------------------------------------
# vectorised numpy fallback

def _poles(z):
    return (z.imag == 0.0) & (z.real <= 0.0) & (z.real == np.floor(z.real))


def _poly(coeffs, u):
    acc = np.zeros_like(u)
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc * u


def _shifted(z, threshold, step):
    """Shift ``z`` right until ``Re w >= threshold``, accumulating ``step(w)``."""
    w = np.array(z, dtype=np.complex128, copy=True)
    acc = np.zeros_like(w)
    active = w.real < threshold
    while active.any():
        wa = w[active]
        acc[active] += step(wa)
        w[active] = wa + 1.0
        active = w.real < threshold
    return w, acc


def _guarded(kernel, z, threshold):
    z = np.asarray(z, dtype=np.complex128)
    bad = _poles(z)
    zz = np.where(bad, 1.0, z)
    out = kernel(zz, threshold)
    out[bad] = complex(np.nan, np.nan)
    return out


def _digamma_np(z, threshold):
    w, acc = _shifted(z, threshold, lambda w: -1.0 / w)
    inv = 1.0 / w
    return acc + np.log(w) - 0.5 * inv - _poly(_PSI_C, inv * inv)


def _trigamma_np(z, threshold):
    w, acc = _shifted(z, threshold, lambda w: 1.0 / (w * w))
    inv = 1.0 / w
    return acc + inv + 0.5 * inv * inv + inv * _poly(_PSI1_C, inv * inv)


def _loggamma_np(z, threshold):
    w, acc = _shifted(z, threshold, lambda w: -np.log(w))
    inv = 1.0 / w
    return (acc + (w - 0.5) * np.log(w) - w + _HALF_LOG_2PI
            + w * _poly(_LGAM_C, inv * inv))


def digamma_numpy(z, threshold=SHIFT_THRESHOLD):
    return _guarded(_digamma_np, z, threshold)


def trigamma_numpy(z, threshold=SHIFT_THRESHOLD):
    return _guarded(_trigamma_np, z, threshold)


def loggamma_numpy(z, threshold=SHIFT_THRESHOLD):
    return _guarded(_loggamma_np, z, threshold)


if USE_NUMBA:
    digamma, trigamma, loggamma = digamma_numba, trigamma_numba, loggamma_numba
else:
    digamma, trigamma, loggamma = digamma_numpy, trigamma_numpy, loggamma_numpy

__all__ = [
    "HAVE_NUMBA", "SHIFT_THRESHOLD",
    "digamma", "trigamma", "loggamma",
    "digamma_numpy", "trigamma_numpy", "loggamma_numpy",
    "digamma_numba", "trigamma_numba", "loggamma_numba",
]
