"""Adaptive quadrature: finite intervals, tail-subtracted semi-infinite
intervals, vertical lines in the complex plane and Hankel contours.

Integrands are vectorised: they receive a 1-d float (or complex) array of
nodes and return an array of the same length.  All panels of one refinement
sweep are evaluated in a single call, so integrands must be pure functions of
their argument.
"""
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from .errors import BranchError, ConvergenceError, DivergenceError, DomainError

# Gauss-Kronrod 10/21 (QUADPACK qk21)
_XGK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
])
_WGK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[1:10:2] = _WG
GAUSS_WEIGHTS[11:20:2] = _WG[::-1]

MAX_DEPTH = 60
MAX_PANELS = 200_000
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class AccuracyBudget:
    """Absolute and relative error targets; the looser of the two applies."""

    abs_tol: float = 1e-10
    rel_tol: float = 0.0

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise DomainError("tolerances must be non-negative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise DomainError("at least one tolerance must be positive")

    def target(self, value):
        return max(self.abs_tol, self.rel_tol * abs(value))

    def scaled(self, factor):
        return AccuracyBudget(self.abs_tol * factor, self.rel_tol * factor)


def as_budget(tol):
    if isinstance(tol, AccuracyBudget):
        return tol
    return AccuracyBudget(abs_tol=float(tol))


class QuadResult(NamedTuple):
    value: complex
    error: float
    evaluations: int
    floor: float = 0.0  # rounding level of the accepted panels


# ---------------------------------------------------------------------------
# finite intervals

def _gk_batch(f, a, b, scale=None):
    """GK21 on many panels at once.  Returns (kronrod, error, abs_kronrod).

    ``scale`` optionally supplies the magnitude of the terms that cancel
    inside ``f``; the rounding floor is measured against it.
    """
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel())).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise ConvergenceError("integrand returned a non-finite value")
    k = half * (fx @ KRONROD_WEIGHTS)
    g = half * (fx @ GAUSS_WEIGHTS)
    resabs = np.abs(half) * (np.abs(fx) @ KRONROD_WEIGHTS)
    if scale is not None:
        sx = np.abs(np.asarray(scale(x.ravel()))).reshape(x.shape)
        resabs = np.maximum(resabs, np.abs(half) * (sx @ KRONROD_WEIGHTS))
    err = np.abs(k - g)
    return k, err, resabs


def _adaptive(f, a, b, budget, max_depth=MAX_DEPTH, scale=None):
    length = b - a
    lo = np.array([a], dtype=float)
    hi = np.array([b], dtype=float)
    depth = np.zeros(1, dtype=int)
    done_val = 0.0
    done_err = 0.0
    done_floor = 0.0
    n_eval = 0
    estimate = None
    while lo.size:
        k, err, resabs = _gk_batch(f, lo, hi, scale)
        n_eval += 21 * lo.size
        if estimate is None:
            estimate = k.sum()
        target = budget.target(estimate)
        share = target * (hi - lo) / length
        ok = (err <= share) | (err <= 50 * _EPS * resabs)
        if done_err + err.sum() <= 0.5 * target:
            # globally converged; tiny panels at an endpoint singularity
            # would otherwise never meet their local share
            ok[:] = True
        done_val = done_val + k[ok].sum()
        done_err += err[ok].sum() + 4 * _EPS * resabs[ok].sum()
        done_floor += 50 * _EPS * resabs[ok].sum()
        estimate = done_val + k[~ok].sum()
        lo, hi, depth = lo[~ok], hi[~ok], depth[~ok]
        if not lo.size:
            break
        if depth.max() >= max_depth or lo.size > MAX_PANELS:
            rest = err[~ok].sum()
            raise ConvergenceError(
                f"adaptive quadrature on [{a}, {b}] stopped at depth {int(depth.max())} "
                f"with error {done_err + rest:.3g} > {target:.3g}",
                estimate=estimate, error=done_err + rest)
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        depth = np.concatenate([depth, depth]) + 1
    return QuadResult(done_val, float(done_err), n_eval, float(done_floor))


def integrate_finite(f, a, b, tol=1e-10, singularity=None, max_depth=MAX_DEPTH):
    """Integrate ``f`` over ``[a, b]``.

    Parameters
    ----------
    f : callable
        Vectorised integrand.
    a, b : float
        Interval, ``a < b``.
    tol : float or AccuracyBudget
    singularity : None, "log" or float
        Endpoint behaviour at ``a``: ``"log"`` for a logarithmic singularity,
        a float ``p > -1`` for ``(v - a)**p``.  Either is handled by the
        substitution ``v = a + (b - a) exp(-u)``.

    Returns
    -------
    QuadResult
        Value, error estimate and number of integrand evaluations.
    """
    if not b > a:
        raise DomainError(f"integrate_finite needs a < b, got [{a}, {b}]")
    budget = as_budget(tol)
    if singularity is None:
        return _adaptive(f, float(a), float(b), budget, max_depth)
    if singularity == "log":
        p = 0.0
    else:
        p = float(singularity)
        if not p > -1:
            raise DomainError(f"algebraic endpoint exponent must exceed -1, got {p}")
    width = float(b - a)
    # neglected piece is O(exp(-(p + 1) u_max) u_max)
    u_max = 46.0 / min(1.0, p + 1.0) if p < 0 else 46.0

    def g(u):
        w = width * np.exp(-u)
        return f(a + w) * w

    return _adaptive(g, 0.0, u_max, budget, max_depth)


# ---------------------------------------------------------------------------
# semi-infinite intervals

@dataclass(frozen=True)
class TailModel:
    """Asymptotic terms ``coefficient * v**exponent * log(v)**log_power`` to subtract.

    ``decay`` is the exponent of the leading neglected term of the residual,
    used for the truncation bound; leave it ``None`` to estimate it from the
    panel sums.
    """

    terms: Tuple[Tuple[float, int, float], ...] = ()
    decay: Optional[float] = None

    def __post_init__(self):
        terms = tuple((float(p), int(h), float(c)) for p, h, c in self.terms)
        object.__setattr__(self, "terms", terms)
        keys = [(p, h) for p, h, _ in terms]
        if len(set(keys)) != len(keys):
            raise DomainError("duplicate (exponent, log_power) in tail model")
        exps = [p for p, _, _ in terms]
        if any(e2 > e1 for e1, e2 in zip(exps, exps[1:])):
            raise DomainError("tail exponents must be non-increasing")
        if any(h < 0 for _, h, _ in terms):
            raise DomainError("log powers must be non-negative")

    def __call__(self, v):
        v = np.asarray(v, dtype=float)
        out = np.zeros_like(v)
        if self.terms:
            lv = np.log(v)
            for p, h, c in self.terms:
                out = out + c * v ** p * lv ** h
        return out


def integrate_tail(f, a, tail=TailModel(), tol=1e-10, max_panels=400, min_panels=4):
    """Integrate ``f(v) - tail(v)`` over ``[a, inf)``.

    The range is cut into geometric panels ``[a 2^k, a 2^(k+1)]`` that are
    integrated adaptively until the bound on the remaining tail, extrapolated
    from the last panel with the residual decay exponent ``q``
    (ratio ``2^(q+1)`` per panel), falls below the tolerance.
    """
    if not a > 0:
        raise DomainError("integrate_tail needs a > 0")
    if not isinstance(tail, TailModel):
        tail = TailModel(tuple(tail))
    budget = as_budget(tol)
    panel_budget = budget.scaled(1.0 / 64)

    def h(v):
        return f(v) - tail(v)

    total = 0.0
    err = 0.0
    n_eval = 0
    sizes = []
    trend = []
    quiet = 0
    lo = float(a)
    for k in range(max_panels):
        hi = 2.0 * lo
        res = _adaptive(h, lo, hi, panel_budget, scale=tail if tail.terms else None)
        total = total + res.value
        err += res.error
        n_eval += res.evaluations
        lo = hi
        if abs(res.value) <= 8.0 * res.floor:
            # panel value is rounding noise: the residual is below what the
            # subtraction can resolve, so further panels add nothing
            quiet += 1
            sizes.append(res.floor)
            if quiet >= 2 and k + 1 >= min_panels:
                ratio = _decay_ratio(sizes, tail.decay) if tail.decay is not None else 0.5
                remainder = res.floor * ratio / (1.0 - ratio) if ratio < 1.0 else np.inf
                if remainder + err <= budget.target(total):
                    return QuadResult(total, float(err + remainder), n_eval)
                raise ConvergenceError(
                    f"tail integral reached the rounding floor {res.floor:.3g} above the "
                    f"tolerance {budget.target(total):.3g}", estimate=total, error=err + remainder)
            continue
        quiet = 0
        sizes.append(abs(res.value))
        if len(sizes) < 3 or k + 1 < min_panels:
            continue
        observed = _decay_ratio(sizes, None)
        trend.append(observed)
        ratio = observed if tail.decay is None else max(_decay_ratio(sizes, tail.decay), min(observed, 1.0))
        if ratio >= 1.0:
            # a residual that stops shrinking over several panels is not integrable
            if k >= 16 and len(trend) >= 8 and min(trend[-8:]) >= 0.98:
                q = np.log2(observed) - 1.0 if observed > 0 else 0.0
                raise DivergenceError(
                    f"residual does not decay (estimated exponent {q:.3f} >= -1); "
                    f"subtract the v^{q:.2f} term", exponent=q, estimate=total, error=err)
            continue
        remainder = sizes[-1] * ratio / (1.0 - ratio)
        if remainder + err <= budget.target(total):
            return QuadResult(total, float(err + remainder), n_eval)
    raise ConvergenceError(f"tail integral not converged after {max_panels} panels",
                           estimate=total, error=err)


def _decay_ratio(sizes, decay):
    if decay is not None:
        # log factors slow the decay slightly; keep a margin
        return min(2.0 ** (decay + 1.0) * 1.25, 1.0)
    a, b, c = sizes[-3], sizes[-2], sizes[-1]
    if c == 0.0 and b == 0.0:
        return 0.0
    if b == 0.0 or a == 0.0:
        return 0.5
    return max(c / b, b / a, 0.0)


# ---------------------------------------------------------------------------
# contour integrals

def integrate_vertical_line(g, x0, tol=1e-12, y_start=1.0, y_limit=1e4):
    """(1/2 pi i) times the integral of ``g`` along ``Re z = x0``, upward.

    ``g`` must decay at least exponentially in ``|Im z|``.  The truncation
    height grows by 1.5x until the integrand is negligible at both ends.
    """
    budget = as_budget(tol)
    x0 = float(x0)

    def edge(y):
        return np.abs(g(np.array([x0 + 1j * y, x0 - 1j * y]))).max()

    y = float(y_start)
    prev = edge(y)
    floor = budget.target(1.0) * 1e-3
    while prev > floor:
        y *= 1.5
        cur = edge(y)
        if y > y_limit or (cur >= prev and y > 8 * y_start):
            raise DomainError(f"integrand on Re z = {x0} does not decay (|g| = {cur:.3g} at |Im z| = {y:.3g})")
        prev = cur

    def h(t):
        return g(x0 + 1j * t)

    res = _adaptive(h, -y, y, budget.scaled(2 * np.pi))
    return QuadResult(res.value / (2 * np.pi), res.error / (2 * np.pi), res.evaluations)


class HankelResult(NamedTuple):
    value: float
    imag_residual: float
    error: float
    c0: float
    d: float


def hankel_heat_trace(r_kappa, t, tol=1e-10, c0=None, d=1.0):
    """(1/2 pi i) times the integral of ``exp(-lambda t) r(lambda)`` around ``[c0, inf)``.

    ``r_kappa`` is the trace as a function of ``kappa = sqrt(-lambda)``
    (principal root, ``Re kappa > 0``).  The counter-clockwise contour is
    the ray ``Im lambda = +d`` coming in from ``+inf``, the left semicircle of
    radius ``d`` about ``c0`` and the ray ``Im lambda = -d`` going out.
    Poles enclosed by the contour contribute their residues, so the caller
    controls whether an eigenvalue below the continuum is counted via
    ``c0`` and ``d``.  Defaults: ``c0 = -1/t``, ``d = 1``.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    budget = as_budget(tol)
    c0 = -1.0 / t if c0 is None else float(c0)
    d = float(d)
    length = 46.0 / t

    def integrand(lam):
        return np.exp(-lam * t) * r_kappa(np.sqrt(-lam + 0j))

    sub = budget.scaled(1.0 / 3)
    # top ray runs right-to-left, bottom ray left-to-right
    top = _adaptive(lambda x: integrand(x + 1j * d), c0, c0 + length, sub)
    bottom = _adaptive(lambda x: integrand(x - 1j * d), c0, c0 + length, sub)

    def arc(theta):
        lam = c0 + d * np.exp(1j * theta)
        return integrand(lam) * 1j * d * np.exp(1j * theta)

    semi = _adaptive(arc, 0.5 * np.pi, 1.5 * np.pi, sub)
    total = (bottom.value - top.value + semi.value) / (2j * np.pi)
    err = (top.error + bottom.error + semi.error) / (2 * np.pi)
    value = float(total.real)
    resid = abs(total.imag)
    if resid > max(budget.target(value), 10 * err):
        raise BranchError(f"Hankel contour sum has imaginary part {resid:.3g}; check the branch of r")
    return HankelResult(value, resid, float(err), c0, d)
