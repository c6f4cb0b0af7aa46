"""Oracle checks run by ``relzeta verify``.

Each check compares a computed quantity with an independent oracle and
reports the measured discrepancy against its tolerance.
"""
import time
from dataclasses import dataclass, replace
from math import pi
from typing import Callable, List, Optional

import numpy as np

from . import model as cd
from . import specfun
from .errors import RelZetaError
from .quadrature import integrate_vertical_line
from .spectral import LargeVTerm, fit_tail_coefficients, resolved_coefficients
from .zeta import (coulomb_delta_closed_form, contour_heat_trace, heat_trace, laurent_at_minus_half,
                   laurent_ring_fit, log_partition)

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass
class CheckResult:
    name: str
    status: str
    discrepancy: Optional[float] = None
    tolerance: Optional[float] = None
    detail: str = ""
    seconds: float = 0.0

    def as_dict(self):
        return {"name": self.name, "status": self.status, "discrepancy": self.discrepancy,
                "tolerance": self.tolerance, "detail": self.detail, "seconds": self.seconds}


def _judge(name, disc, tol, detail=""):
    disc = float(disc)
    ok = np.isfinite(disc) and disc < tol
    return CheckResult(name, PASS if ok else FAIL, disc, tol, detail)


# ---------------------------------------------------------------------------
# individual checks

def check_special_values():
    C = specfun.EULER_GAMMA
    d = max(abs(specfun.digamma(1.0) + C), abs(specfun.digamma(2.0) - (1.0 - C)),
            abs(specfun.trigamma(1.0) - pi ** 2 / 6.0))
    return _judge("special-values", d, 1e-12, "psi(1)+C, psi(2)-(1-C), psi'(1)-pi^2/6")


def check_recurrences(n=1000, seed=20240611):
    rng = np.random.default_rng(seed)
    z = rng.uniform(0.1, 50.0, n) + 1j * rng.uniform(-50.0, 50.0, n)
    r1 = np.abs(specfun.digamma(z + 1) - specfun.digamma(z) - 1.0 / z)
    r2 = np.abs(specfun.trigamma(z + 1) - specfun.trigamma(z) + 1.0 / z ** 2)
    return _judge("recurrences", max(r1.max(), r2.max()), 1e-12, f"{n} random points")


def _sin2(z):
    return pi ** 2 / np.sin(pi * z) ** 2


def check_vertical_line_unit():
    v = integrate_vertical_line(_sin2, 0.5, tol=1e-12).value
    return _judge("vertical-line-unit", abs(v - 1.0), 1e-8, "(1/2 pi i) int pi^2/sin^2(pi z) dz = 1")


def check_vertical_line_trigamma():
    worst = 0.0
    for a in (1.0, 2.0, 1.5):
        v = integrate_vertical_line(lambda z, a=a: _sin2(z) / (z + a), 0.5, tol=1e-12).value
        worst = max(worst, abs(v - (specfun.trigamma(a) - 1.0 / a ** 2)))
    return _judge("vertical-line-trigamma", worst, 1e-8, "a in {1, 2, 1.5}")


def check_I_identity(params):
    if params.gamma == 0:
        return CheckResult("I-contour-vs-closed", SKIP, detail="gamma = 0: z = gamma/2kappa vanishes, "
                           "the contour representation needs Re z > 0")
    worst = 0.0
    for z in (0.25, 0.5, 1.0, 2.0):
        worst = max(worst, abs(cd.I_contour(z) - cd.I_closed(z)))
    return _judge("I-contour-vs-closed", worst, 1e-8, "z in {0.25, 0.5, 1, 2}")


def fit_large_kappa(params, k_min=1e2, k_max=1e4, points=200):
    """Fit kappa^2 r on [k_min, k_max] against 1, 1/kappa, log(kappa^2)/kappa.

    Next-order terms kappa^-n log^m kappa (n = 2..4, m = 0..n) are carried
    as nuisance columns.  Returns (a20, a30, a31).
    """
    k = np.geomspace(k_min, k_max, points)
    y = (k * k * cd.relative_trace(params, k)).real
    lk = np.log(k)
    cols = [np.ones_like(k), 1.0 / k, 2.0 * lk / k]
    for n in (2, 3, 4):
        cols += [lk ** m / k ** n for m in range(n + 1)]
    X = np.column_stack(cols)
    norms = np.linalg.norm(X, axis=0)
    c = np.linalg.lstsq(X / norms, y, rcond=None)[0] / norms
    return float(c[0]), float(c[1]), float(c[2])


def check_large_kappa(params):
    a20, a30, a31 = fit_large_kappa(params)
    e20, e30, e31 = cd.large_lambda_coefficients(params)
    d = abs(a20 - e20) / abs(e20)
    detail = f"fitted a20={a20:.10g}, a31={a31:.10g}"
    if e31 != 0:
        d = max(d, abs(a31 - e31) / abs(e31))
    else:
        d = max(d, abs(a31))
    return _judge("large-kappa-fit", d, 1e-4, detail)


def check_small_kappa(params):
    exp = cd.small_lambda_expansion(params)
    lead = exp.terms[0]
    kappa = 1e-6 if lead.exponent == 0 else 1e-9
    r = cd.relative_trace(params, kappa).real
    approx = lead.coefficient * (kappa * kappa) ** lead.exponent
    return _judge("small-kappa-limit", abs(r - approx) / abs(approx), 1e-8,
                  f"leading term b (-lambda)^{lead.exponent:g}")


def check_tail_fit(model, coeffs, gamma):
    fit = fit_tail_coefficients(model, 1e2, 1e4)
    used31 = coeffs.large(-1.5, 1)
    used30 = coeffs.large(-1.5, 0)
    # sign-sensitive comparison against the coefficients actually subtracted
    if gamma > 0:
        d31 = abs(fit.e_log - used31) / (gamma / pi)
    else:
        d31 = abs(fit.e_log - used31)
    d30 = abs(fit.e_const - used30) / max(abs(used30), 1e-300)
    return _judge("spectral-tail-fit", max(d31, d30), 1e-3,
                  f"fitted e31={fit.e_log:.10g}, e30={fit.e_const:.10g}; "
                  f"subtracted e31={used31:.10g}, e30={used30:.10g}")


def check_heat_trace(model):
    worst = 0.0
    for t in (0.5, 1.0, 2.0):
        worst = max(worst, abs(heat_trace(model, t, 1e-10) - contour_heat_trace(model, t, 1e-10).value))
    return _judge("heat-trace-cross", worst, 1e-6, "t in {0.5, 1, 2}")


def check_ring_fit(model, coeffs):
    closed = laurent_at_minus_half(model, 1e-11, coeffs, allow_bound_state=True)
    ring = laurent_ring_fit(model, coeffs=coeffs, allow_bound_state=True)
    d = max(abs(ring.res2 - closed.res2), abs(ring.res1 - closed.res1), abs(ring.res0 - closed.res0))
    return _judge("laurent-ring-fit", d, 1e-5,
                  f"ring res2={ring.res2:.10g}, closed res2={closed.res2:.10g}")


def check_specialisation(model, coeffs, params, beta):
    res = log_partition(model, beta, 1.0, tol=1e-10, allow_bound_state=True, coeffs=coeffs)
    c1, c0, cp, _ = coulomb_delta_closed_form(params.gamma, params.alpha, beta,
                                              res.laurent.res0, res.log_eta)
    d = max(abs(c1 - res.res1_zeta_L), abs(c0 - res.res0_zeta_L), abs(cp - res.res0_zeta_prime_L))
    return _judge("specialisation-identity", d, 1e-10, "generic residues vs closed forms")


def check_bound_states():
    E = cd.find_bound_state(cd.ModelParams(0.0, -1.0 / (4.0 * pi)))
    d = abs(E + 1.0)
    mismatches = 0
    for g in np.linspace(0.0, 5.0, 10):
        th = cd.bound_state_threshold(g)
        for off in (-0.01, 0.01):
            p = cd.ModelParams(float(g), th + off)
            if (cd.find_bound_state(p) is not None) != (off < 0):
                mismatches += 1
    if mismatches:
        return CheckResult("bound-states", FAIL, d, 1e-12, f"{mismatches} threshold verdict mismatches")
    return _judge("bound-states", d, 1e-12, "E(0, -1/4pi) = -1; verdicts on 10 gamma values")


def check_ell_identity(model, coeffs, beta):
    a = log_partition(model, beta, 1.0, 1e-10, True, coeffs)
    b = log_partition(model, beta, 3.0, 1e-10, True, coeffs)
    d = abs((b.log_ZR - a.log_ZR) + a.res0_zeta_L * np.log(3.0))
    return _judge("ell-identity", d, 1e-12, "log Z(3) - log Z(1) = -Res0 log 3")


# ---------------------------------------------------------------------------

def inject_flipped_e31(coeffs):
    """Copy of ``coeffs`` with the sign of the log v tail coefficient reversed."""
    large = tuple(LargeVTerm(t.alpha, t.h, -t.coefficient) if (t.alpha == -1.5 and t.h == 1) else t
                  for t in coeffs.large_v)
    return replace(coeffs, large_v=large)


def run_checks(gamma=1.0, alpha=0.0, beta=1.0, flip_e31=False):
    """Run the oracle suite; returns a list of :class:`CheckResult`.

    Parameters below the bound-state threshold are verified on the
    continuous part of the spectrum.
    """
    params = cd.ModelParams(gamma, alpha)
    model = cd.coulomb_delta_model(params, allow_bound_state=True)
    coeffs = resolved_coefficients(model)
    if flip_e31:
        coeffs = inject_flipped_e31(coeffs)
    checks: List[Callable] = [
        check_special_values,
        check_recurrences,
        check_vertical_line_unit,
        check_vertical_line_trigamma,
        lambda: check_I_identity(params),
        lambda: check_large_kappa(params),
        lambda: check_small_kappa(params),
        lambda: check_tail_fit(model, coeffs, gamma),
        lambda: check_heat_trace(model),
        lambda: check_ring_fit(model, coeffs),
        lambda: check_specialisation(model, coeffs, params, beta),
        check_bound_states,
        lambda: check_ell_identity(model, coeffs, beta),
    ]
    names = ["special-values", "recurrences", "vertical-line-unit", "vertical-line-trigamma",
             "I-contour-vs-closed", "large-kappa-fit", "small-kappa-limit", "spectral-tail-fit",
             "heat-trace-cross", "laurent-ring-fit", "specialisation-identity", "bound-states",
             "ell-identity"]
    out = []
    for name, check in zip(names, checks):
        t0 = time.perf_counter()
        try:
            res = check()
        except RelZetaError as exc:
            res = CheckResult(name, FAIL, detail=f"{type(exc).__name__}: {exc}")
        res.seconds = time.perf_counter() - t0
        out.append(res)
    return out
