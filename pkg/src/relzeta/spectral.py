"""Relative spectral measure and its asymptotic coefficients.

e(v) = (v / pi i) [r(kappa = +iv) - r(kappa = -iv)] is the jump of the
relative trace across the continuum, written in kappa = sqrt(-lambda): the
lower lip of the cut lambda = v^2 maps to kappa = +iv, the upper lip to -iv.
With r(conj kappa) = conj r(kappa) this is (2v/pi) Im r(iv).

Sign conventions
----------------
Substituting r ~ b (-lambda)^beta into the definition gives
c = +2 b sin(pi beta) / pi, and r ~ a (-lambda)^alpha log^k(-lambda) gives
e_{k,h} = +a (pi i)^(k-h-1) C(k,h) (e^{i pi alpha} - (-1)^(k-h) e^{-i pi alpha}).
A widely quoted form of both formulas carries an extra overall minus sign.
``convention="measure"`` (default) follows the definition above,
``convention="printed"`` the other form; :func:`resolve_sign` decides between
them by fitting the computed measure.
"""
from dataclasses import dataclass
from math import comb
from typing import Optional, Tuple

import numpy as np

from .errors import BranchError, DomainError, IllConditionedError
from .expansions import LAMBDA

MEASURE = "measure"
PRINTED = "printed"
_SIGN = {MEASURE: 1.0, PRINTED: -1.0}

BRANCH_CHECK_TOL = 1e-10
RICHARDSON_EPS = 1e-8


@dataclass(frozen=True)
class SpectralSample:
    v: float
    e: float


@dataclass(frozen=True)
class SmallVTerm:
    """c v^(2 beta + 1) near v = 0."""

    beta: float
    coefficient: float

    @property
    def v_power(self):
        return 2.0 * self.beta + 1.0


@dataclass(frozen=True)
class RawLargeVTerm:
    """e_{k,h} v^(2 alpha + 1) log^h(v^2) from the (alpha, k) trace term."""

    alpha: float
    k: int
    h: int
    coefficient: float


@dataclass(frozen=True)
class LargeVTerm:
    """e_h v^(2 alpha + 1) log^h v (aggregated over k, natural log of v)."""

    alpha: float
    h: int
    coefficient: float

    @property
    def v_power(self):
        return 2.0 * self.alpha + 1.0


@dataclass(frozen=True)
class SpectralCoefficients:
    small_v: Tuple[SmallVTerm, ...]
    large_v: Tuple[LargeVTerm, ...]
    raw_large_v: Tuple[RawLargeVTerm, ...]
    convention: str = MEASURE
    sign_record: Optional["SignResolution"] = None

    def large(self, alpha, h):
        for t in self.large_v:
            if t.alpha == alpha and t.h == h:
                return t.coefficient
        return 0.0

    def small(self, beta):
        for t in self.small_v:
            if t.beta == beta:
                return t.coefficient
        return 0.0

    def with_sign(self, factor):
        return SpectralCoefficients(
            tuple(SmallVTerm(t.beta, factor * t.coefficient) for t in self.small_v),
            tuple(LargeVTerm(t.alpha, t.h, factor * t.coefficient) for t in self.large_v),
            tuple(RawLargeVTerm(t.alpha, t.k, t.h, factor * t.coefficient) for t in self.raw_large_v),
            self.convention, self.sign_record)


def _sin_pi(x):
    # exact zeros and units at multiples of 1/2
    twice = 2.0 * x
    if twice == np.round(twice):
        n = int(np.round(twice)) % 4
        return (0.0, 1.0, 0.0, -1.0)[n]
    return float(np.sin(np.pi * x))


def _cos_pi(x):
    return _sin_pi(x + 0.5)


# ---------------------------------------------------------------------------
# the measure

def spectral_measure(model, v, check=True, method="axis"):
    """e(v; A, A0) for ``v > 0`` (scalar or array).

    ``method="axis"`` evaluates the trace on the imaginary kappa axis;
    ``method="limit"`` approaches it from ``Re kappa = eps v`` and removes the
    O(eps) error by Richardson extrapolation.  With ``check`` the two-sided
    difference r(iv) - r(-iv) is compared against the symmetry-reduced form
    and a :class:`BranchError` is raised if they disagree.
    """
    v_arr = np.asarray(v, dtype=float)
    scalar = v_arr.ndim == 0
    v_arr = np.atleast_1d(v_arr)
    if np.any(v_arr <= 0):
        raise DomainError("spectral measure needs v > 0")
    if model.density is not None:
        e = np.asarray(model.density(v_arr), dtype=float) * np.ones_like(v_arr)
        return float(e[0]) if scalar else e
    if method == "axis":
        up = np.asarray(model.trace(1j * v_arr))
        down = np.asarray(model.trace(-1j * v_arr)) if check else None
    elif method == "limit":
        up = _richardson(model.trace, v_arr, +1.0)
        down = _richardson(model.trace, v_arr, -1.0) if check else None
    else:
        raise DomainError(f"unknown method {method!r}")
    e = (2.0 / np.pi) * v_arr * up.imag
    if check:
        two_sided = (v_arr / (np.pi * 1j) * (up - down)).real
        scale = np.maximum(np.abs(e), v_arr * np.abs(up) * 1e-6)
        bad = np.abs(two_sided - e) > BRANCH_CHECK_TOL * scale
        if np.any(bad):
            i = int(np.argmax(bad))
            raise BranchError(f"two-sided and symmetric spectral measure disagree at v={v_arr[i]!r}: "
                              f"{two_sided[i]!r} vs {e[i]!r}")
    return float(e[0]) if scalar else e


def _richardson(trace, v, side):
    eps = RICHARDSON_EPS
    r1 = np.asarray(trace(eps * v + side * 1j * v))
    r2 = np.asarray(trace(0.5 * eps * v + side * 1j * v))
    return 2.0 * r2 - r1


def spectral_table(model, v_min=1e-3, v_max=1e4, points=400):
    """Log-spaced samples of e(v); returns ``(v, e)`` arrays."""
    if not (0 < v_min < v_max) or points < 2:
        raise DomainError("need 0 < v_min < v_max and points >= 2")
    v = np.geomspace(v_min, v_max, int(points))
    return v, spectral_measure(model, v)


# ---------------------------------------------------------------------------
# coefficients

def small_v_coefficients(small_lambda, convention=MEASURE):
    """c_j of e(v) ~ sum c_j v^(2 beta_j + 1) from b_j (-lambda)^beta_j.

    Integer beta_j give exactly zero.
    """
    if small_lambda.convention != LAMBDA:
        raise DomainError("expected an expansion in powers of (-lambda)")
    if any(t.log_power for t in small_lambda):
        raise DomainError("small-lambda expansion may not carry logarithms")
    sign = _SIGN[convention]
    return [SmallVTerm(t.exponent, sign * 2.0 * t.coefficient * _sin_pi(t.exponent) / np.pi)
            for t in small_lambda]


def _raw_coefficient(a, alpha, k, h):
    m = k - h
    # (pi i)^(m-1) (e^{i pi alpha} - (-1)^m e^{-i pi alpha}), always real
    if m % 2 == 0:
        factor = 2.0 * _sin_pi(alpha) * np.pi ** (m - 1) * (-1.0) ** (m // 2)
    else:
        factor = 2.0 * _cos_pi(alpha) * np.pi ** (m - 1) * (-1.0) ** ((m - 1) // 2)
    return float(a * comb(k, h) * factor)


def large_v_coefficients(large_lambda, convention=MEASURE):
    """Raw e_{j,k,h} (log v^2 basis) and aggregated e_{j,h} (log v basis).

    Returns ``(raw, aggregated)``; the aggregation is
    e_{j,h} = 2^h sum_{k >= h} e_{j,k,h} since log v^2 = 2 log v.
    """
    if large_lambda.convention != LAMBDA:
        raise DomainError("expected an expansion in powers of (-lambda)")
    sign = _SIGN[convention]
    raw = []
    for t in large_lambda:
        for h in range(t.log_power + 1):
            raw.append(RawLargeVTerm(t.exponent, t.log_power, h,
                                     sign * _raw_coefficient(t.coefficient, t.exponent, t.log_power, h)))
    agg = {}
    for t in raw:
        key = (t.alpha, t.h)
        agg[key] = agg.get(key, 0.0) + 2.0 ** t.h * t.coefficient
    order = sorted(agg, key=lambda k: (-k[0], -k[1]))
    return raw, [LargeVTerm(a, h, agg[(a, h)]) for a, h in order]


def spectral_coefficients(model, convention=MEASURE):
    raw, agg = large_v_coefficients(model.large_lambda, convention)
    return SpectralCoefficients(tuple(small_v_coefficients(model.small_lambda, convention)),
                                tuple(agg), tuple(raw), convention)


# ---------------------------------------------------------------------------
# tail fitting and sign resolution

@dataclass(frozen=True)
class TailFit:
    """Least-squares fit of v^-(2 alpha + 1) e(v) against sum_h e_h log^h v."""

    alpha: float
    coefficients: Tuple[float, ...]   # e_h for h = 0, 1, ...
    residual: float
    condition: float
    v_min: float
    v_max: float

    @property
    def e_log(self):
        return self.coefficients[1] if len(self.coefficients) > 1 else 0.0

    @property
    def e_const(self):
        return self.coefficients[0]


def fit_tail_coefficients(model, v_min=1e2, v_max=1e4, alpha=-1.5, log_powers=1,
                          points=200, correction_orders=3, max_condition=1e12):
    """Fit the large-v tail ``e(v) ~ (e_1 log v + e_0) v^(2 alpha + 1)``.

    The fitted quantity is ``v^-(2 alpha + 1) e(v)`` on a log-spaced grid.
    Sub-leading terms ``v^-n log^m v`` (n = 1..``correction_orders``,
    m = 0..n + ``log_powers`` - 1) enter the design matrix as nuisance columns
    so they do not bias the leading coefficients.
    """
    if not (v_min >= 10 and v_max >= 10 * v_min):
        raise DomainError("need v_min >= 10 and v_max >= 10 v_min")
    v = np.geomspace(v_min, v_max, points)
    y = spectral_measure(model, v) * v ** -(2.0 * alpha + 1.0)
    lv = np.log(v)
    cols = [lv ** h for h in range(log_powers + 1)]
    for n in range(1, correction_orders + 1):
        cols += [lv ** m / v ** n for m in range(n + log_powers)]
    X = np.column_stack(cols)
    norms = np.linalg.norm(X, axis=0)
    Xs = X / norms
    cond = float(np.linalg.cond(Xs))
    if not np.isfinite(cond) or cond > max_condition:
        raise IllConditionedError(f"tail fit condition number {cond:.3g} exceeds {max_condition:.3g}")
    beta, *_ = np.linalg.lstsq(Xs, y, rcond=None)
    beta = beta / norms
    resid = float(np.sqrt(np.mean((X @ beta - y) ** 2)))
    return TailFit(alpha, tuple(float(b) for b in beta[:log_powers + 1]), resid, cond, v_min, v_max)


@dataclass(frozen=True)
class SignResolution:
    """Which sign convention the computed measure supports."""

    alpha: float
    fitted: Tuple[float, ...]
    measure_candidate: Tuple[float, ...]
    printed_candidate: Tuple[float, ...]
    chosen: str
    discrepancy: bool
    mismatch: float

    def as_dict(self):
        return {
            "alpha": self.alpha,
            "fitted": list(self.fitted),
            "measure_convention": list(self.measure_candidate),
            "printed_convention": list(self.printed_candidate),
            "chosen": self.chosen,
            "printed_formula_sign_flipped": self.chosen != PRINTED,
            "unresolved": self.discrepancy,
            "relative_mismatch": self.mismatch,
        }


def resolve_sign(model, v_min=1e2, v_max=1e4, rtol=1e-3):
    """Decide the sign of the large-v coefficients from the computed measure.

    Uses the slowest-decaying non-vanishing aggregated term.  Returns ``None``
    when the model has no such term or no trace to fit.
    """
    if model.density is not None:
        return None
    _, agg = large_v_coefficients(model.large_lambda, MEASURE)
    live = [t for t in agg if t.coefficient != 0.0]
    if not live:
        return None
    alpha = live[0].alpha
    hmax = max(t.h for t in agg if t.alpha == alpha)
    fit = fit_tail_coefficients(model, v_min, v_max, alpha=alpha, log_powers=max(hmax, 1))
    meas = np.array([sum(t.coefficient for t in agg if t.alpha == alpha and t.h == h)
                     for h in range(len(fit.coefficients))])
    fitted = np.array(fit.coefficients)
    scale = max(np.abs(meas).max(), 1e-300)
    d_meas = float(np.abs(fitted - meas).max() / scale)
    d_print = float(np.abs(fitted + meas).max() / scale)
    chosen = MEASURE if d_meas <= d_print else PRINTED
    mismatch = min(d_meas, d_print)
    return SignResolution(alpha, tuple(fitted), tuple(meas), tuple(-meas), chosen,
                          mismatch > rtol, mismatch)


def resolved_coefficients(model, resolve=True):
    """Coefficients used for subtraction: magnitudes from the expansions, sign from the fit."""
    coeffs = spectral_coefficients(model, MEASURE)
    if not resolve:
        return coeffs
    record = resolve_sign(model)
    if record is None:
        return coeffs
    out = coeffs if record.chosen == MEASURE else coeffs.with_sign(-1.0)
    return SpectralCoefficients(out.small_v, out.large_v, out.raw_large_v, record.chosen, record)
