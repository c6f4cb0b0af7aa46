"""Coulomb plus point interaction at the origin in R^3.

H0 = -Laplacian + gamma/|x| and H_alpha = H0 + alpha delta_0, gamma >= 0.
The relative resolvent trace is a rank-one closed form in
z = gamma / (2 kappa), kappa = sqrt(-lambda):

    r = -z I(z) / (gamma (4 pi alpha - gamma F(z)))
    I(z) = 1 - 2 z + 2 psi'(1 + z) z**2
    F(z) = psi(1 + z) - log z - 1/(2 z) - psi(1) - psi(2)

With gamma/(2z) = kappa this is evaluated as r = -I(z) / (2 kappa D) where
D = 4 pi alpha + kappa - gamma (psi(1 + z) - log z + 2C - 1), which stays
finite as gamma -> 0 and reproduces the point-interaction limit
r = -1/(2 kappa (4 pi alpha + kappa)).
"""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import zeta as zeta_fn

from . import specfun
from .errors import BoundStateError, BracketError, DomainError, EigenvaluePoleError, PoleError
from .expansions import LAMBDA, Expansion, ExpansionTerm, RelativeModel
from .quadrature import integrate_vertical_line
from .specfun import EULER_GAMMA as C

FOUR_PI = 4.0 * np.pi
# psi(1) + psi(2) = 1 - 2C
PSI1_PLUS_PSI2 = 1.0 - 2.0 * C
# |z| above which I(z) is summed from its asymptotic series instead of the
# cancelling closed form; exponentially small corrections there are < 1e-40
I_SERIES_RADIUS = 16.0
POLE_GUARD = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Couplings of -Laplacian + gamma/|x| + alpha delta_0."""

    gamma: float
    alpha: float

    def __post_init__(self):
        if not (np.isfinite(self.gamma) and np.isfinite(self.alpha)):
            raise DomainError("gamma and alpha must be finite")
        if self.gamma < 0:
            raise DomainError("attractive Coulomb coupling gamma < 0 is not supported")

    @property
    def threshold(self):
        return bound_state_threshold(self.gamma)

    @property
    def has_bound_state(self):
        return self.alpha < self.threshold


def F(z):
    """F(z) = psi(1+z) - log z - 1/(2z) - psi(1) - psi(2), principal log (gamma > 0 branch)."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise PoleError("F has a pole at z = 0")
    out = specfun.digamma(1.0 + z) - np.log(z) - 0.5 / z - PSI1_PLUS_PSI2
    return complex(out) if np.ndim(out) == 0 else out


def I_closed(z):
    """I(z) = 1 - 2 z + 2 psi'(1 + z) z**2."""
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    big = np.abs(z) >= I_SERIES_RADIUS
    if np.any(~big):
        zs = z[~big]
        out[~big] = 1.0 - 2.0 * zs + 2.0 * specfun.trigamma(1.0 + zs) * zs * zs
    if np.any(big):
        out[big] = _I_series(z[big])
    return complex(out[0]) if scalar else out


def _I_series(z):
    # z I(z) ~ 2 sum_k B_2k z^(2-2k)
    inv2 = 1.0 / (z * z)
    acc = np.zeros_like(z)
    for k in range(8, 0, -1):
        acc = acc * inv2 + 2.0 * specfun.bernoulli(2 * k)
    return acc / z


def I_contour(z, tol=1e-12):
    """I(z) from its defining line integral (independent check of :func:`I_closed`).

    The line ``Re s = x0`` is placed midway between ``max(0, 1 - Re z)`` and 1,
    so the poles at s = -z, 1 - z and s = 0, -1, ... lie to its left and
    s = 1, 2, ... to its right.
    """
    z = complex(z)
    if not z.real > 0:
        raise DomainError("I_contour needs Re z > 0")
    x0 = 0.5 * (max(0.0, 1.0 - z.real) + 1.0)

    def g(s):
        return (z * (1.0 - s) * s / ((s + z) * (s - 1.0 + z))
                * np.pi ** 2 / np.sin(np.pi * s) ** 2)

    return complex(integrate_vertical_line(g, x0, tol).value)


def _gamma_F(params, kappa):
    """gamma * F(gamma / 2 kappa), with the gamma -> 0 limit -kappa."""
    g = params.gamma
    if g == 0:
        return -kappa
    z = g / (2.0 * kappa)
    # subnormal gamma can underflow z to 0; the limit there is the gamma = 0 one
    zero = z == 0
    zs = np.where(zero, 1.0, z)
    out = g * (specfun.digamma(1.0 + zs) - np.log(zs) - PSI1_PLUS_PSI2) - kappa
    return np.where(zero, -kappa, out) if np.any(zero) else out


def denominator(params, kappa):
    """4 pi alpha - gamma F(gamma / 2 kappa); its zeros on kappa > 0 are eigenvalues."""
    return FOUR_PI * params.alpha - _gamma_F(params, np.asarray(kappa, dtype=complex))


def relative_trace(params, kappa):
    """Trace of R(lambda; H_alpha) - R(lambda; H0) at lambda = -kappa**2.

    ``kappa`` may be an array; ``Re kappa >= 0`` (the imaginary axis is the
    boundary value used for the spectral measure) and ``kappa != 0``.
    """
    k = np.asarray(kappa, dtype=complex)
    scalar = k.ndim == 0
    k = np.atleast_1d(k)
    if np.any(k == 0):
        raise DomainError("relative trace undefined at kappa = 0")
    if np.any(k.real < 0):
        raise DomainError("relative trace needs Re kappa >= 0")
    gF = _gamma_F(params, k)
    D = FOUR_PI * params.alpha - gF
    near = np.abs(D) < POLE_GUARD * (1.0 + np.abs(gF))
    if np.any(near):
        raise EigenvaluePoleError(f"eigenvalue pole at kappa = {k[near][0]!r}")
    if params.gamma == 0:
        I = 1.0
    else:
        I = I_closed(params.gamma / (2.0 * k))
    r = -I / (2.0 * k * D)
    return complex(r[0]) if scalar else r


def trace_function(params):
    """``kappa -> relative_trace(params, kappa)`` as a plain callable."""
    def r(kappa):
        return relative_trace(params, kappa)
    return r


# ---------------------------------------------------------------------------
# expansions

def b0_printed(params):
    g, a = np.float64(params.gamma), params.alpha
    return float(-1.0 / (3.0 * g * (g - 2.0 * C * g + FOUR_PI * a)))


def b1_printed(params):
    g, a = np.float64(params.gamma), params.alpha
    return float(((17.0 - 24.0 * C) * g + 48.0 * np.pi * a) / (
        45.0 * g ** 3 * (2.0 * C * g - g - FOUR_PI * a) ** 2))


MAX_SMALL_ORDER = 15


def small_lambda_expansion(params, order=2):
    """First ``order`` terms of r as lambda -> 0.

    For gamma > 0 the terms are b_k (-lambda)**k.  They come from dividing the
    large-z series z I(z) = 2 sum B_2k z^(2-2k) by
    D = D0 + gamma sum B_2k/(2k) z^(-2k), with z^-2 = 4 (-lambda)/gamma**2;
    b_0 and b_1 are taken from their closed forms.  For gamma = 0 the trace
    -1/(2 kappa (4 pi alpha + kappa)) is a geometric series in kappa.
    """
    if not 1 <= order <= MAX_SMALL_ORDER:
        raise DomainError(f"order must be in 1..{MAX_SMALL_ORDER}")
    g, a = params.gamma, params.alpha
    if g == 0:
        if a == 0:
            raise DomainError("gamma = alpha = 0: r = -1/(2 kappa^2) has no admissible small-lambda expansion")
        q = np.float64(FOUR_PI * a)
        with np.errstate(over="ignore", divide="ignore", under="ignore"):
            coeffs = [-(-1.0) ** n / (2.0 * q ** (n + 1)) for n in range(order)]
        if not np.all(np.isfinite(coeffs)):
            raise DomainError(f"alpha = {a!r} is too small: small-lambda coefficients overflow")
        terms = [ExpansionTerm(0.5 * (n - 1), 0, float(c)) for n, c in enumerate(coeffs)]
        return Expansion(tuple(terms), LAMBDA, "increasing")
    d0 = FOUR_PI * a + g * PSI1_PLUS_PSI2
    if abs(d0) <= 1e-14 * (abs(FOUR_PI * a) + g):
        raise DomainError("alpha at the bound-state threshold: r diverges as lambda -> 0")
    num = [2.0 * specfun.bernoulli(2 * (m + 1)) for m in range(order)]
    den = [d0] + [g * specfun.bernoulli(2 * m) / (2.0 * m) for m in range(1, order)]
    quo = []
    for m in range(order):
        acc = num[m] - sum(quo[i] * den[m - i] for i in range(m))
        quo.append(acc / d0)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        scale = np.float64(4.0) / np.float64(g) ** 2
        coeffs = [-quo[m] / g * scale ** m for m in range(order)]
        coeffs[0] = b0_printed(params)
        if order > 1:
            coeffs[1] = b1_printed(params)
    if not np.all(np.isfinite(coeffs)):
        raise DomainError(f"gamma = {g!r} is too small: small-lambda coefficients overflow (use gamma = 0)")
    return Expansion(tuple(ExpansionTerm(float(m), 0, float(c)) for m, c in enumerate(coeffs)), LAMBDA,
                     "increasing")


def large_lambda_coefficients(params):
    """(a_20, a_30, a_31)."""
    g, a = params.gamma, params.alpha
    glog = g * (np.log(g) - np.log(2.0)) if g > 0 else 0.0
    a30 = 0.5 * (FOUR_PI * a + (2.0 - C) * g + glog)
    return -0.5, a30, -0.25 * g


def large_lambda_expansion(params):
    """r ~ a_20 (-lambda)^-1 + (a_30 + a_31 log(-lambda)) (-lambda)^-3/2 as lambda -> inf."""
    a20, a30, a31 = large_lambda_coefficients(params)
    return Expansion((ExpansionTerm(-1.0, 0, a20), ExpansionTerm(-1.5, 0, a30),
                      ExpansionTerm(-1.5, 1, a31)), LAMBDA, "decreasing")


MAX_LARGE_ORDER = 16


def _mul(A, B):
    """Product of truncated double series sum c[n, m] x^n L^m."""
    N = A.shape[0]
    out = np.zeros_like(A)
    for i, j in zip(*np.nonzero(A)):
        out[i:, j:] += A[i, j] * B[:N - i, :N - j]
    return out


def large_lambda_series(params, order=6):
    """Large-lambda expansion of r through (-lambda)^(-order/2).

    Generated exactly by series arithmetic in x = 1/kappa and L = log kappa:
    with z = gamma x / 2,

        r = -(x^2 / 2) I(z) / (1 + u),
        u = x (B - gamma L - gamma S(x)),  B = 4 pi alpha + gamma (1 - C + log(gamma/2)),
        S = psi(1 + z) + C = sum_{k>=2} (-1)^k zeta(k) z^(k-1),
        I = 1 - 2z + 2 z^2 sum_{k>=0} (-1)^k (k+1) zeta(k+2) z^k,

    and kappa^-n L^m = (-lambda)^(-n/2) (log(-lambda)/2)^m.  The first three
    terms reproduce a_20, a_30 and a_31.
    """
    if not 2 <= order <= MAX_LARGE_ORDER:
        raise DomainError(f"order must be in 2..{MAX_LARGE_ORDER}")
    g, a = params.gamma, params.alpha
    N = order + 1
    h = 0.5 * g
    U = np.zeros((N, N))
    I = np.zeros((N, N))
    I[0, 0] = 1.0
    if N > 1:
        U[1, 0] = FOUR_PI * a + (g * (1.0 - C + np.log(h)) if g > 0 else 0.0)
        U[1, 1] = -g
        I[1, 0] = -g
    for k in range(2, N):
        U[k, 0] -= g * (-1.0) ** k * zeta_fn(k) * h ** (k - 1)
        I[k, 0] += 2.0 * (-1.0) ** (k - 2) * (k - 1) * zeta_fn(k) * h ** k
    G = np.zeros((N, N))
    G[0, 0] = 1.0
    P = G.copy()
    for _ in range(1, N):
        P = _mul(P, -U)
        G += P
    R = _mul(I, G)
    terms = []
    for n in range(N - 2):
        for m in range(n + 1):
            c = -0.5 * R[n, m] / 2.0 ** m
            if c != 0.0:
                terms.append(ExpansionTerm(-(n + 2) / 2.0, m, float(c)))
    return Expansion(tuple(terms), LAMBDA, "decreasing")


# ---------------------------------------------------------------------------
# bound states

def bound_state_threshold(gamma):
    """alpha*(gamma) = -gamma (psi(1) + psi(2)) / (4 pi); a bound state exists iff alpha < alpha*."""
    if gamma < 0:
        raise DomainError("gamma must be >= 0")
    return -gamma * PSI1_PLUS_PSI2 / FOUR_PI


def find_bound_state(params, x_min=1e-8, x_max=1.0, max_doublings=200):
    """The negative eigenvalue E of H_alpha, or ``None`` when there is none.

    Solves 4 pi alpha - gamma F(gamma / 2x) = 0 for x = sqrt(-E) > 0.  The
    left-hand side increases monotonically in x, so a sign change is
    bracketed by growing ``x_max`` geometrically.
    """
    if not params.has_bound_state:
        return None

    def f(x):
        return denominator(params, x).real

    lo, hi = x_min, x_max
    f_lo = f(lo)
    if f_lo > 0:
        raise BracketError(f"no sign change at x = {lo:g} although alpha < alpha*; "
                           "alpha is too close to the threshold to resolve")
    for _ in range(max_doublings):
        if f(hi) > 0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise BracketError("failed to bracket the bound-state root")
    x = brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    return -x * x


def require_no_bound_state(params):
    if params.has_bound_state:
        E = find_bound_state(params)
        raise BoundStateError(
            f"gamma={params.gamma}, alpha={params.alpha} is below the threshold "
            f"alpha*={params.threshold:.12g}: 4 pi alpha - gamma F(gamma/2 sqrt(-E)) = 0 "
            f"has the root E={E:.17g}, so the spectrum is not purely continuous", energy=E)


EXTENDED_ORDER = 8


def coulomb_delta_model(params, small_order=2, allow_bound_state=True):
    """Wrap the Coulomb+delta pair as a :class:`RelativeModel`.

    With ``allow_bound_state=False`` parameters below the threshold are
    rejected; otherwise the eigenvalue is recorded in ``bound_states`` and the
    zeta machinery works with the continuous part of the spectrum only.
    """
    if not allow_bound_state:
        require_no_bound_state(params)
    E = find_bound_state(params)
    return RelativeModel(
        trace=trace_function(params),
        small_lambda=small_lambda_expansion(params, small_order),
        large_lambda=large_lambda_expansion(params),
        name=f"coulomb-delta(gamma={params.gamma!r}, alpha={params.alpha!r})",
        bound_states=() if E is None else (E,),
        next_large_exponent=-2.0,
        extended_large=large_lambda_series(params, EXTENDED_ORDER),
        params={"gamma": params.gamma, "alpha": params.alpha},
    )
