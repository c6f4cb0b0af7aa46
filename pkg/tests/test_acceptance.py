"""The ten acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with the measured
discrepancy before asserting, so ``pytest -s`` or the captured report shows
the full table.
"""
import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from relzeta import model as cd
from relzeta import specfun
from relzeta.quadrature import integrate_vertical_line
from relzeta.spectral import fit_tail_coefficients, resolve_sign, resolved_coefficients
from relzeta.verification import fit_large_kappa, run_checks
from relzeta.zeta import (contour_heat_trace, coulomb_delta_closed_form, heat_trace, laurent_ring_fit,
                          log_partition)

GOLDEN = Path(__file__).parent / "golden" / "partition_gamma1_alpha0.json"
C = specfun.EULER_GAMMA


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {detail}")
        assert ok, f"criterion {number} ({title}) failed: {detail}"
    return emit


def test_criterion_01_special_functions(report):
    t0 = time.perf_counter()
    d = max(abs(specfun.digamma(1.0) + C), abs(specfun.digamma(2.0) - (1 - C)),
            abs(specfun.trigamma(1.0) - math.pi ** 2 / 6))
    rng = np.random.default_rng(1)
    z = rng.uniform(0.1, 50, 1000) + 1j * rng.uniform(-50, 50, 1000)
    rec = max(np.abs(specfun.digamma(z + 1) - specfun.digamma(z) - 1 / z).max(),
              np.abs(specfun.trigamma(z + 1) - specfun.trigamma(z) + 1 / z ** 2).max())
    dt = time.perf_counter() - t0
    report(1, "special functions", d < 1e-12 and rec < 1e-12 and dt < 1.0,
           f"special values {d:.2e}, recurrences {rec:.2e}, {dt:.2f} s")


def test_criterion_02_vertical_line(report):
    t0 = time.perf_counter()
    sin2 = lambda z: math.pi ** 2 / np.sin(np.pi * z) ** 2
    d = abs(integrate_vertical_line(sin2, 0.5, tol=1e-12).value - 1)
    for a in (1.0, 2.0, 1.5):
        v = integrate_vertical_line(lambda z, a=a: sin2(z) / (z + a), 0.5, tol=1e-12).value
        d = max(d, abs(v - (specfun.trigamma(a) - 1 / a ** 2)))
    dt = time.perf_counter() - t0
    report(2, "vertical-line identities", d < 1e-8 and dt < 5.0, f"max discrepancy {d:.2e}, {dt:.2f} s")


def test_criterion_03_I_identity(report):
    t0 = time.perf_counter()
    d = max(abs(cd.I_contour(z) - (1 - 2 * z + 2 * specfun.trigamma(1 + z) * z * z)) for z in (0.25, 0.5, 1.0, 2.0))
    dt = time.perf_counter() - t0
    report(3, "I(z) contour vs closed form", d < 1e-8 and dt < 10.0, f"max discrepancy {d:.2e}, {dt:.2f} s")


def test_criterion_04_trace_asymptotics(report):
    worst = 0.0
    for g in (0.5, 1.0, 2.0):
        a20, _, a31 = fit_large_kappa(cd.ModelParams(g, 0.0))
        worst = max(worst, abs(a20 + 0.5) / 0.5, abs(a31 + g / 4) / (g / 4))
    p = cd.ModelParams(1.0, 0.0)
    b0 = cd.b0_printed(p)
    small = abs(cd.relative_trace(p, 1e-6).real - b0) / abs(b0)
    report(4, "trace asymptotics", worst < 1e-4 and small < 1e-8,
           f"large-kappa fit rel. error {worst:.2e}, small-kappa limit rel. error {small:.2e}")


def test_criterion_05_spectral_tail(report):
    m = cd.coulomb_delta_model(cd.ModelParams(1.0, 0.0), allow_bound_state=True)
    fit = fit_tail_coefficients(m, 1e2, 1e4)
    e30 = (-2 * C + 4 + math.log(0.25)) / (2 * math.pi)
    d31 = abs(abs(fit.e_log) - 1 / math.pi) * math.pi
    d30 = abs(fit.e_const - e30) / abs(e30)
    rec = resolve_sign(m)
    ok = d31 < 1e-3 and d30 < 1e-3 and rec is not None and rec.chosen in ("measure", "printed")
    report(5, "spectral-measure tail", ok,
           f"|e31| rel. error {d31:.2e}, e30 rel. error {d30:.2e}, sign convention '{rec.chosen}'")


def test_criterion_06_heat_trace(report):
    t0 = time.perf_counter()
    m = cd.coulomb_delta_model(cd.ModelParams(1.0, 0.0), allow_bound_state=True)
    d = max(abs(heat_trace(m, t, 1e-10) - contour_heat_trace(m, t, 1e-10).value) for t in (0.5, 1.0, 2.0))
    dt = time.perf_counter() - t0
    report(6, "heat-trace cross-oracle", d < 1e-6 and dt < 60.0, f"max discrepancy {d:.2e}, {dt:.2f} s")


def test_criterion_07_ring_fit(report):
    m = cd.coulomb_delta_model(cd.ModelParams(1.0, 0.0), allow_bound_state=True)
    ring = laurent_ring_fit(m, allow_bound_state=True)
    d = abs(ring.res2 + 1 / (4 * math.pi))
    report(7, "Laurent ring fit at s=-1/2", d < 1e-5, f"res2 {ring.res2:.10f}, discrepancy {d:.2e}")


def test_criterion_08_specialisation(report):
    worst = 0.0
    for g in (0.5, 1.0, 2.0):
        for a in (0.1, 0.5, 1.0):
            m = cd.coulomb_delta_model(cd.ModelParams(g, a))
            coeffs = resolved_coefficients(m)
            for b in (1.0, 2 * math.pi):
                res = log_partition(m, b, 1.0, 1e-10, coeffs=coeffs)
                c1, c0, cp, _ = coulomb_delta_closed_form(g, a, b, res.laurent.res0, res.log_eta)
                worst = max(worst, abs(c1 - res.res1_zeta_L), abs(c0 - res.res0_zeta_L),
                            abs(cp - res.res0_zeta_prime_L))
    report(8, "specialisation identity (18 points)", worst < 1e-10, f"max discrepancy {worst:.2e}")


def test_criterion_09_bound_states(report):
    E = cd.find_bound_state(cd.ModelParams(0.0, -1 / (4 * math.pi)))
    d = abs(E + 1)
    wrong = 0
    for g in np.linspace(0.0, 5.0, 10):
        th = cd.bound_state_threshold(g)
        for off in (-0.01, 0.01):
            wrong += (cd.find_bound_state(cd.ModelParams(float(g), th + off)) is not None) != (off < 0)
    report(9, "bound states", d < 1e-12 and wrong == 0, f"|E + 1| = {d:.2e}, {wrong} wrong verdicts of 20")


def test_criterion_10_partition(report):
    t0 = time.perf_counter()
    checks = run_checks(1.0, 0.0, 1.0)
    verify_s = time.perf_counter() - t0
    verify_ok = all(c.status != "fail" for c in checks)
    m = cd.coulomb_delta_model(cd.ModelParams(1.0, 0.0), allow_bound_state=True)
    coeffs = resolved_coefficients(m)
    r1 = log_partition(m, 1.0, 1.0, 1e-8, True, coeffs)
    r2 = log_partition(m, 1.0, 7.0, 1e-8, True, coeffs)
    ell_d = abs((r2.log_ZR - r1.log_ZR) + r1.res0_zeta_L * math.log(7.0))
    ell_ok = ell_d <= 8 * np.finfo(float).eps * (abs(r1.log_ZR) + abs(r2.log_ZR))
    golden = json.loads(GOLDEN.read_text())["results"]["log_ZR"]
    g_d = abs(r1.log_ZR - golden)
    ok = verify_ok and ell_ok and g_d < 1e-10 and verify_s < 300
    report(10, "partition function", ok,
           f"ell identity {ell_d:.1e}, golden log Z_R {golden!r} reproduced to {g_d:.1e}, "
           f"verify suite {verify_s:.1f} s ({sum(c.status == 'pass' for c in checks)} pass)")
