"""Relative zeta function, its Laurent data, the relative eta function and log Z_R.

The engine works from the spectral representation

    zeta(s) = int_0^inf v^(-2s) e(v) dv

continued past the strip of convergence by subtracting the known small-v and
large-v terms of e(v) and adding their integrals back in closed form:

    int_0^1 c v^(2 beta + 1 - 2s) dv            = c / (2 (beta + 1 - s))
    int_1^inf e v^(2 alpha + 1 - 2s) log^h v dv = (-1)^(h+1) h! e / (2 (alpha + 1 - s))^(h+1)

Pole locations come from the expansion metadata, never from the model name.
"""
from dataclasses import dataclass, field
from math import factorial, log, pi
from typing import Optional, Tuple

import numpy as np

from .errors import BoundStateError, DomainError, PoleError
from .expansions import LAMBDA, Expansion
from .quadrature import QuadResult, TailModel, as_budget, hankel_heat_trace, integrate_finite, integrate_tail
from .spectral import LargeVTerm, SmallVTerm, large_v_coefficients, resolved_coefficients, spectral_measure
from .specfun import EULER_GAMMA as C

POLE_PROXIMITY = 1e-6
ETA_CUTOFF = 45.0       # log(1 - e^-x) < 3e-20 beyond x = 45
HEAT_CUTOFF = 46.0      # e^-x < 1e-20 beyond x = 46
DEFAULT_TOL = 1e-10

LOG2 = log(2.0)
# Laurent-to-residue constants of the circle factor at s = 0
P2 = 2.0 * (1.0 - LOG2)
P3 = 2.0 + pi ** 2 / 6.0 + 2.0 * (1.0 - LOG2) ** 2


@dataclass(frozen=True)
class LaurentData:
    """Coefficients of (s - center)^-2, (s - center)^-1 and (s - center)^0."""

    center: float
    res2: float
    res1: float
    res0: float
    error: float = 0.0

    def __post_init__(self):
        if not all(np.isfinite(x) for x in (self.res2, self.res1, self.res0)):
            raise DomainError("non-finite Laurent coefficient")


@dataclass(frozen=True)
class PartitionResult:
    beta: float
    ell: float
    res1_zeta_L: float
    res0_zeta_L: float
    res0_zeta_prime_L: float
    log_eta: float
    log_ZR: float
    laurent: Optional[LaurentData] = None
    diagnostics: dict = field(default_factory=dict, compare=False)

    def as_dict(self):
        return {
            "beta": self.beta,
            "ell": self.ell,
            "res1_zeta_L": self.res1_zeta_L,
            "res0_zeta_L": self.res0_zeta_L,
            "res0_zeta_prime_L": self.res0_zeta_prime_L,
            "log_eta": self.log_eta,
            "log_ZR": self.log_ZR,
        }


def _check_continuum(model, allow_bound_state):
    if model.bound_states and not allow_bound_state:
        E = model.bound_states[0]
        raise BoundStateError(
            f"{model.name} has the negative eigenvalue E={E:.17g} (root of "
            "4 pi alpha - gamma F(gamma/2 sqrt(-E)) = 0; see find_bound_state); the zeta "
            "machinery needs a purely continuous spectrum", energy=E)


def _coefficients(model, coeffs):
    return resolved_coefficients(model) if coeffs is None else coeffs


# ---------------------------------------------------------------------------
# continuation

@dataclass(frozen=True)
class _Split:
    small: Tuple[SmallVTerm, ...]
    large: Tuple[LargeVTerm, ...]
    decay_small: Optional[float]
    decay_large: Optional[float]
    extra: Tuple[LargeVTerm, ...] = ()


@dataclass(frozen=True)
class Accelerator:
    """Exact large-v terms beyond the primary expansion, subtracted on [start, inf).

    Their integrals over [start, inf) are added back in closed form, so they
    change only the convergence speed of the tail integral, never its limit.
    ``next_alpha`` is the exponent of the first term left out.
    """

    terms: Tuple[LargeVTerm, ...]
    start: float
    next_alpha: float


def _term_sizes(terms, v):
    lv = log(v)
    out = {}
    for t in terms:
        out[t.alpha] = out.get(t.alpha, 0.0) + abs(t.coefficient) * v ** t.v_power * lv ** t.h
    return out


def accelerator_terms(model, coeffs, ratio=0.25, v_first=16.0, v_last=2.0 ** 30):
    """Spectral images of ``model.extended_large`` beyond the primary expansion.

    The subtraction starts at the first power of two where successive orders
    shrink by at least ``ratio``, so a slowly converging series (large
    |alpha| at gamma = 0) does not cancel catastrophically near v = 1.
    Returns ``None`` when the model has no extended expansion.
    """
    ext = model.extended_large
    if ext is None or not len(ext):
        return None
    primary = [t.exponent for t in model.large_lambda]
    floor = min(primary) if primary else np.inf
    extra = Expansion(tuple(t for t in ext if t.exponent < floor), LAMBDA, "decreasing")
    if not len(extra):
        return None
    _, agg = large_v_coefficients(extra, coeffs.convention)
    terms = tuple(t for t in agg if t.coefficient != 0.0)
    next_alpha = min(t.exponent for t in ext) - 0.5
    if not terms:
        return Accelerator((), v_first, next_alpha)
    v = v_first
    while v <= v_last:
        sizes = _term_sizes(terms, v)
        alphas = sorted(sizes, reverse=True)
        if all(sizes[b] <= ratio * sizes[a] for a, b in zip(alphas, alphas[1:]) if sizes[a] > 0):
            return Accelerator(terms, v, next_alpha)
        v *= 2.0
    return None


def _incomplete(p, h, start):
    """int_start^inf v^p log^h v dv, continued analytically in p."""
    q = -(p + 1.0)
    L = log(start)
    total = 0.0
    for j in range(h + 1):
        total += factorial(h) / factorial(h - j) * L ** (h - j) / q ** (j + 1)
    return start ** (p + 1.0) * total


def _fast(term, s):
    return term.v_power - 2.0 * s < -1.05


def _split(model, coeffs, s, extra_small=(), extra_large=(), accel=None):
    """Choose subtracted terms so both remainder integrals converge near ``s``.

    Subtraction is made for the whole neighbourhood of s = -1/2 at once so the
    set does not change across the double pole there.
    """
    lo = max(s, -0.5) - 1.0
    hi = min(s, -0.5) - 1.0
    small = [t for t in coeffs.small_v if t.beta <= lo] + list(extra_small)
    large = [t for t in coeffs.large_v if t.alpha >= hi]
    if accel is not None:
        # accelerator terms too slow to integrate from ``start`` join the
        # ordinary subtraction and carry their poles
        large += [t for t in accel.terms if not _fast(t, s)]
    # local power of the remainder integrand, for the singularity / decay hints
    rest_small = [t.beta for t in coeffs.small_v if t.beta > lo and t.coefficient != 0.0]
    p_small = 2.0 * min(rest_small) + 1.0 - 2.0 * s if rest_small else None
    rest_large = [t.alpha for t in coeffs.large_v if t.alpha < hi and t.coefficient != 0.0]
    if accel is not None:
        rest_large.append(accel.next_alpha)
    elif model.next_large_exponent is not None:
        rest_large.append(model.next_large_exponent)
    q_large = 2.0 * max(rest_large) + 1.0 - 2.0 * s if rest_large else None
    return _Split(tuple(small), tuple(large), p_small, q_large, tuple(extra_large))


def _pole_terms(split, s, skip_center=None):
    """Closed-form integrals of the subtracted terms, optionally leaving out
    the singular ones at ``skip_center``."""
    total = 0.0
    for t in split.small:
        d = t.beta + 1.0 - s
        if skip_center is not None and t.beta + 1.0 == skip_center:
            continue
        if t.coefficient == 0.0:
            continue
        if abs(d) < POLE_PROXIMITY:
            raise PoleError(f"s={s!r} is within {POLE_PROXIMITY:g} of the pole s={t.beta + 1.0!r}")
        total += 0.5 * t.coefficient / d
    for t in split.large + split.extra:
        d = t.alpha + 1.0 - s
        if skip_center is not None and t.alpha + 1.0 == skip_center:
            continue
        if t.coefficient == 0.0:
            continue
        if abs(d) < POLE_PROXIMITY:
            raise PoleError(f"s={s!r} is within {POLE_PROXIMITY:g} of the pole s={t.alpha + 1.0!r}")
        total += (-1.0) ** (t.h + 1) * factorial(t.h) * t.coefficient / (2.0 * d) ** (t.h + 1)
    return total


def _merged_tail(terms, s, decay):
    merged = {}
    for t in _ordered(terms):
        key = (t.v_power - 2.0 * s, t.h)
        merged[key] = merged.get(key, 0.0) + t.coefficient
    return TailModel(tuple((p, h, c) for (p, h), c in merged.items()), decay=decay)


def _remainder_integrals(model, split, s, tol, accel=None):
    """int_0^1 and int_1^inf of v^(-2s) (e - subtracted terms).

    With an accelerator the upper integral is split at ``accel.start``; the
    accelerator terms are removed beyond it and their integrals added back.
    """
    budget = as_budget(tol).scaled(0.5)

    def near(v):
        v = np.asarray(v, dtype=float)
        out = spectral_measure(model, v, check=False)
        for t in split.small:
            out = out - t.coefficient * v ** t.v_power
        return v ** (-2.0 * s) * out

    sing = split.decay_small if (split.decay_small is not None and split.decay_small < 0) else None
    lower = integrate_finite(near, 0.0, 1.0, tol=budget, singularity=sing)

    def far(v):
        v = np.asarray(v, dtype=float)
        return v ** (-2.0 * s) * spectral_measure(model, v, check=False)

    # accelerator terms must decay fast enough at this s to be worth removing
    acc = () if accel is None else tuple(t for t in accel.terms if _fast(t, s))
    decay = split.decay_large
    if not acc:
        tail = _merged_tail(split.large + split.extra, s, decay)
        return lower, integrate_tail(far, 1.0, tail, tol=budget)
    # caller-supplied extra terms need not be part of e(v); they are removed on
    # [1, start) only, where cancellation against them is harmless
    near_tail = _merged_tail(split.large + split.extra, s, None)
    mid = integrate_finite(lambda v: far(v) - near_tail(v), 1.0, accel.start, tol=budget.scaled(0.5))
    full = _merged_tail(split.large + acc, s, decay)
    rest = integrate_tail(far, accel.start, full, tol=budget.scaled(0.5))
    back = sum(t.coefficient * _incomplete(t.v_power - 2.0 * s, t.h, accel.start) for t in acc)
    back -= sum(t.coefficient * _incomplete(t.v_power - 2.0 * s, t.h, accel.start) for t in split.extra)
    upper = QuadResult(mid.value + rest.value + back, mid.error + rest.error,
                       mid.evaluations + rest.evaluations, rest.floor)
    return lower, upper


def _ordered(terms):
    return sorted(terms, key=lambda t: (-t.alpha, -t.h))


def _accelerator(model, coeffs, accelerate):
    if accelerate is True:
        return accelerator_terms(model, coeffs)
    if not accelerate:
        return None
    return accelerate


def zeta_continued(model, s, tol=DEFAULT_TOL, coeffs=None, extra_small=(), extra_large=(),
                   allow_bound_state=False, return_error=False, accelerate=True):
    """Meromorphically continued relative zeta function at real ``s``.

    Parameters
    ----------
    model : RelativeModel
    s : float
        Must not lie within 1e-6 of a pole.
    tol : float or AccuracyBudget
    coeffs : SpectralCoefficients, optional
        Precomputed (sign-resolved) coefficients.
    extra_small, extra_large : sequence of SmallVTerm / LargeVTerm
        Additional terms to subtract and add back; the result must not change.
    accelerate : bool or Accelerator
        Subtract the model's extended large-v terms (see :func:`accelerator_terms`)
        so the remainder integral converges quickly for s near -1.
    """
    _check_continuum(model, allow_bound_state)
    s = float(s)
    coeffs = _coefficients(model, coeffs)
    accel = _accelerator(model, coeffs, accelerate)
    split = _split(model, coeffs, s, extra_small, extra_large, accel)
    poles = _pole_terms(split, s)
    lower, upper = _remainder_integrals(model, split, s, tol, accel)
    value = float(poles + lower.value + upper.value)
    if return_error:
        return value, float(lower.error + upper.error)
    return value


def laurent_at_minus_half(model, tol=DEFAULT_TOL, coeffs=None, allow_bound_state=False,
                          accelerate=True):
    """Laurent coefficients of zeta(s) at s = -1/2.

    res2 = e_{a,1}/4 and res1 = e_{a,0}/2 - c_b/2 for the alpha = -3/2 and
    beta = -3/2 terms (either may be absent); res0 collects the remaining
    pole terms and the remainder integrals at s = -1/2.
    """
    _check_continuum(model, allow_bound_state)
    coeffs = _coefficients(model, coeffs)
    s0 = -0.5
    center = s0  # pole positions alpha + 1 and beta + 1 equal to -1/2
    res2 = 0.0
    res1 = 0.0
    for t in coeffs.large_v:
        if t.alpha + 1.0 == center and t.coefficient != 0.0:
            if t.h >= 2:
                raise DomainError("log^h terms with h >= 2 at alpha = -3/2 give a pole of order > 2")
            if t.h == 1:
                res2 += t.coefficient / 4.0
            else:
                res1 += t.coefficient / 2.0
    for t in coeffs.small_v:
        if t.beta + 1.0 == center:
            res1 -= t.coefficient / 2.0
    accel = _accelerator(model, coeffs, accelerate)
    split = _split(model, coeffs, s0, accel=accel)
    rest = _pole_terms(split, s0, skip_center=center)
    lower, upper = _remainder_integrals(model, split, s0, tol, accel)
    return LaurentData(s0, res2, res1, float(rest + lower.value + upper.value), float(lower.error + upper.error))


def laurent_ring_fit(model, center=-0.5, deltas=(1e-2, 3e-3, 1e-3), tol=1e-11, coeffs=None,
                     allow_bound_state=False, accelerate=True):
    """Laurent coefficients of orders -2, -1, 0 from zeta on a ring of radii ``deltas``.

    The even part (zeta(c+d) + zeta(c-d))/2 = res2/d^2 + res0 + O(d^2) and the odd
    part = res1/d + O(d) are fitted with one correction column per radius beyond two.
    """
    _check_continuum(model, allow_bound_state)
    coeffs = _coefficients(model, coeffs)
    d = np.asarray(deltas, dtype=float)
    if d.size < 2:
        raise DomainError("need at least two radii")
    acc = _accelerator(model, coeffs, accelerate)
    plus = np.array([zeta_continued(model, center + x, tol, coeffs, allow_bound_state=True, accelerate=acc)
                     for x in d])
    minus = np.array([zeta_continued(model, center - x, tol, coeffs, allow_bound_state=True, accelerate=acc)
                      for x in d])
    even = 0.5 * (plus + minus)
    odd = 0.5 * (plus - minus)
    n = d.size
    E = np.column_stack([d ** -2.0, np.ones(n)] + [d ** (2 * k) for k in range(1, n - 1)])
    O = np.column_stack([d ** -1.0] + [d ** (2 * k - 1) for k in range(1, n)])
    ce = np.linalg.lstsq(E, even, rcond=None)[0]
    co = np.linalg.lstsq(O, odd, rcond=None)[0]
    return LaurentData(center, float(ce[0]), float(co[0]), float(ce[1]))


# ---------------------------------------------------------------------------
# residues on the circle times space

def residua_from_laurent(laurent, beta, log_eta_value):
    """Residues at s = 0 of zeta(s; L, L0) for L = -d_u^2 + A on a circle of length beta.

    Returns ``(res1, res0, res0_prime)``.
    """
    r2, r1, r0 = laurent.res2, laurent.res1, laurent.res0
    res1 = -beta * r2
    res0 = -beta * r1 - P2 * beta * r2
    res0p = -beta * r0 - P2 * beta * r1 - P3 * beta * r2 - 2.0 * log_eta_value
    # + 0.0 turns a signed zero (e.g. -beta * 0) into 0
    return res1 + 0.0, res0 + 0.0, float(res0p) + 0.0


def residua_L(model, beta, tol=DEFAULT_TOL, coeffs=None, allow_bound_state=False):
    """(Res1, Res0, Res0 of the derivative) of zeta(s; L, L0) at s = 0."""
    if not beta > 0:
        raise DomainError("beta must be > 0")
    coeffs = _coefficients(model, coeffs)
    laurent = laurent_at_minus_half(model, tol, coeffs, allow_bound_state)
    eta = log_eta(model, beta, tol)
    return residua_from_laurent(laurent, beta, eta)


def coulomb_delta_closed_form(gamma, alpha, beta, integral, log_eta_value):
    """Closed-form residues and log Z_R (at ell = 1) of the Coulomb+delta pair.

    ``integral`` is int_0^1 v e dv + int_1^inf v (e - e31 log v / v^2 - e30 / v^2) dv
    and ``log_eta_value`` the relative eta integral at ``beta``; both are the
    numeric inputs, everything else is algebra in (gamma, alpha, beta).
    Returns ``(res1, res0, res0_prime, ell_coefficient)`` where
    log Z_R(ell) = res0_prime / 2 + ell_coefficient * log(ell).
    """
    glog = gamma * log(gamma * gamma / 4.0) if gamma > 0 else 0.0
    big = 8.0 * pi * alpha - 2.0 * C * gamma + 4.0 * gamma + glog
    res1 = gamma * beta / (4.0 * pi)
    res0 = -big * beta / (4.0 * pi) + (1.0 - LOG2) * gamma * beta / (2.0 * pi)
    res0p = (-integral * beta - (1.0 - LOG2) * big * beta / (2.0 * pi)
             + P3 * gamma * beta / (4.0 * pi) - 2.0 * log_eta_value)
    glog2 = gamma * log(gamma / 2.0) if gamma > 0 else 0.0
    ell_coef = (4.0 * pi * alpha - C * gamma + 2.0 * gamma + glog2 - gamma + gamma * LOG2) * beta / (2.0 * pi)
    return res1, res0, res0p, ell_coef


# ---------------------------------------------------------------------------
# eta, heat trace, partition function

def log_eta(model, tau, tol=DEFAULT_TOL):
    """log eta(tau) = int_0^inf log(1 - e^(-tau v)) e(v) dv."""
    if not tau > 0:
        raise DomainError("tau must be > 0")
    budget = as_budget(tol).scaled(0.5)

    def f(v):
        v = np.asarray(v, dtype=float)
        return np.log(-np.expm1(-tau * v)) * spectral_measure(model, v, check=False)

    edge = 1.0 / tau
    a = integrate_finite(f, 0.0, edge, tol=budget, singularity="log")
    b = integrate_finite(f, edge, ETA_CUTOFF / tau, tol=budget)
    return float(a.value + b.value)


def heat_trace(model, t, tol=DEFAULT_TOL):
    """Tr(e^(-tA) - e^(-tA0)) over the continuous spectrum: int_0^inf e^(-v^2 t) e(v) dv."""
    if not t > 0:
        raise DomainError("t must be > 0")
    budget = as_budget(tol).scaled(0.5)

    def f(v):
        v = np.asarray(v, dtype=float)
        return np.exp(-t * v * v) * spectral_measure(model, v, check=False)

    edge = 1.0 / np.sqrt(t)
    a = integrate_finite(f, 0.0, edge, tol=budget)
    b = integrate_finite(f, edge, np.sqrt(HEAT_CUTOFF / t), tol=budget)
    return float(a.value + b.value)


def contour_heat_trace(model, t, tol=DEFAULT_TOL, include_bound_states=False):
    """Hankel-contour heat trace of ``model``.

    The default contour crosses the negative axis at -1/t.  When a bound state
    lies inside it and ``include_bound_states`` is false, the contour is
    pulled in to cross at E/3 so only the continuum contributes.
    """
    c0, d = -1.0 / t, 1.0
    if model.bound_states and not include_bound_states:
        E = min(model.bound_states)
        if E >= c0 - d:
            c0, d = E / 3.0, abs(E) / 3.0
    return hankel_heat_trace(model.trace, t, tol=tol, c0=c0, d=d)


def log_partition(model, beta, ell=1.0, tol=DEFAULT_TOL, allow_bound_state=False, coeffs=None):
    """Regularised relative partition function.

    log Z_R = Res0 zeta'(0; L, L0) / 2 - Res0 zeta(0; L, L0) log(ell^2) / 2.
    """
    if not beta > 0:
        raise DomainError("beta must be > 0")
    if not ell > 0:
        raise DomainError("ell must be > 0")
    _check_continuum(model, allow_bound_state)
    coeffs = _coefficients(model, coeffs)
    laurent = laurent_at_minus_half(model, tol, coeffs, allow_bound_state=True)
    eta = log_eta(model, beta, tol)
    res1, res0, res0p = residua_from_laurent(laurent, beta, eta)
    log_zr = 0.5 * res0p - 0.5 * res0 * log(ell * ell)
    diag = {
        "laurent_error": laurent.error,
        "laurent": {"res2": laurent.res2, "res1": laurent.res1, "res0": laurent.res0},
        "sign_resolution": None if coeffs.sign_record is None else coeffs.sign_record.as_dict(),
        "bound_states": list(model.bound_states),
        "tolerance": float(as_budget(tol).abs_tol),
    }
    return PartitionResult(float(beta), float(ell), res1, res0, res0p, float(eta), float(log_zr), laurent, diag)
