"""Self-checks run by ``secrecy-outage validate``.

Each check measures something against an independent reference and reports
pass/fail with the measured value. ``fast`` stays well under a minute;
``full`` adds the closed-form vs Monte Carlo curve comparison and the
fast/slow outage cross-check.
"""

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.special import expn

from . import special_math
from .allocation import objective, optimize_ratio
from .channel import (
    Scheme,
    SystemConfig,
    make_an_vector,
    null_space_basis,
    sample_main_pair,
)
from .montecarlo import estimate_outage, estimate_outage_slow_oracle
from .secrecy import snr_traditional
from .wiretap import build_curve, expected_cw_traditional


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: str
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.measured} ({self.seconds:.1f}s)"


def check_closed_form_vs_quadrature():
    worst = 0.0
    for alpha in (0.1, 1.0, 10.0, 100.0):
        for shape in (1, 2, 4, 8):
            err = abs(special_math.gamma_log_integral(alpha, shape) - special_math.quad_log_gamma_oracle(alpha, shape))
            worst = max(worst, err)
    return worst <= 1e-8, f"max |closed form - quadrature| = {worst:.3g} (limit 1e-8)"


def check_exp_int_vs_scipy():
    xs = np.linspace(0.01, 50.0, 200)
    worst = max(abs(special_math.exp_int(n, x) - expn(n, x)) for n in range(1, 17) for x in xs)
    return worst <= 1e-10, f"max |E_n - scipy expn| = {worst:.3g} (limit 1e-10)"


def check_recurrence_residual():
    worst = 0.0
    for n in range(1, 17):
        for x in np.linspace(0.01, 50.0, 100):
            r = n * special_math.exp_int(n + 1, x) - math.exp(-x) + x * special_math.exp_int(n, x)
            worst = max(worst, abs(r))
    return worst < 1e-12, f"max recurrence residual = {worst:.3g} (limit 1e-12)"


def check_channel_geometry():
    rng = np.random.default_rng(11)
    worst_rho = worst_proj = worst_null = 0.0
    for rho2 in (0.0, 0.3, 0.9, 1.0):
        config = SystemConfig(M=4, rho2=rho2)
        for _ in range(200):
            real = sample_main_pair(config, rng)
            worst_rho = max(worst_rho, abs(real.rho2_realized - rho2))
            f = real.h_ab / np.linalg.norm(real.h_ab)
            worst_proj = max(worst_proj, abs(abs(np.vdot(real.h_ae, f)) ** 2 - rho2 * real.g_e) / real.g_e)
            an = make_an_vector(null_space_basis(real.h_ab), rng)
            worst_null = max(worst_null, abs(np.vdot(real.h_ab, an.a)) / np.linalg.norm(an.a))
    ok = worst_rho <= 1e-10 and worst_proj <= 1e-10 and worst_null <= 1e-10
    return ok, f"rho2 error {worst_rho:.2g}, projection error {worst_proj:.2g}, null-space leak {worst_null:.2g}"


def check_curve_shape():
    config = SystemConfig.from_db(3.0, M=4, rho2=0.9)
    curve = build_curve(config)
    ok = curve.values[0] == 0.0 and bool(np.all(np.diff(curve.values) >= -1e-12))
    return ok, f"E[C_w](0) = {curve.values[0]:g}, min increment {np.diff(curve.values).min():.3g}"


def check_optimizer_vs_brute_force():
    config = SystemConfig.from_db(3.0, M=4, rho2=0.9)
    curve = build_curve(config)
    fine = np.linspace(0.0, 1.0, 100_001)
    worst = 0.0
    for g_b in (0.0, 0.3, 1.0, 2.0, 4.0, 9.0):
        res = optimize_ratio(g_b, curve, config)
        brute = objective(fine, g_b, curve, config.P).max()
        worst = max(worst, brute - res.objective)
    return -1e-6 <= worst <= 1e-4, f"max shortfall vs 1e5-point grid = {worst:.3g} bits"


def check_fig4_anchor(trials=100_000):
    values = []
    for M in (2, 4, 8):
        config = SystemConfig.from_db(3.0, M=M, rho2=1.0)
        values.append(estimate_outage(config, build_curve(config), trials, seed=2024).p_out)
    ok = all(abs(v - 0.63) <= 0.05 for v in values)
    return ok, "p_out(rho2=1) for M=2,4,8: " + ", ".join(f"{v:.4f}" for v in values) + " (target 0.63 +/- 0.05)"


def check_worker_invariance():
    config = SystemConfig.from_db(3.0, M=4, rho2=0.9, scheme=Scheme.TRADITIONAL)
    curve = build_curve(config)
    a = estimate_outage(config, curve, 20_000, seed=5, workers=1)
    b = estimate_outage(config, curve, 20_000, seed=5, workers=3)
    return a.outages == b.outages, f"outages with 1 worker {a.outages}, with 3 workers {b.outages}"


def check_fig2_closed_form_vs_mc(samples=1_000_000):
    config = SystemConfig.from_db(3.0, M=4, rho2=0.9)
    rng = np.random.default_rng(2)
    g_e = rng.gamma(config.M, config.sigma2_ae, samples)
    worst = 0.0
    for phi in np.linspace(0.0, 1.0, 11):
        snr_e = snr_traditional(phi, config, 0.0, g_e).snr_e
        c_w = np.log2(1.0 + snr_e)
        se = c_w.std(ddof=1) / math.sqrt(samples)
        gap = abs(c_w.mean() - expected_cw_traditional(phi, config))
        worst = max(worst, gap / se if se > 0 else (0.0 if gap < 1e-15 else math.inf))
    return worst <= 3.0, f"max |closed form - MC| = {worst:.2f} standard errors (limit 3)"


def check_fast_vs_slow():
    parts = []
    ok = True
    for config in (
        SystemConfig.from_db(3.0, M=4, rho2=0.9, scheme=Scheme.TRADITIONAL),
        SystemConfig.from_db(3.0, M=8, N=2, rho2=0.9, scheme=Scheme.RELAY),
    ):
        curve = build_curve(config, rng=np.random.default_rng(3))
        fast = estimate_outage(config, curve, 100_000, seed=9)
        slow = estimate_outage_slow_oracle(config, 1000, 10_000, seed=9, grid_resolution=201)
        sigma = math.hypot(fast.std_error, slow.std_error)
        z = abs(fast.p_out - slow.p_out) / sigma
        ok &= z <= 3.0
        parts.append(f"{config.scheme.value}: fast {fast.p_out:.4f} slow {slow.p_out:.4f} ({z:.2f} sigma)")
    return ok, "; ".join(parts)


FAST_CHECKS = [
    ("closed form vs quadrature oracle", check_closed_form_vs_quadrature),
    ("exponential integral vs reference", check_exp_int_vs_scipy),
    ("exponential integral recurrence", check_recurrence_residual),
    ("channel geometry", check_channel_geometry),
    ("expected wiretap curve shape", check_curve_shape),
    ("optimizer vs brute force", check_optimizer_vs_brute_force),
    ("rho2 = 1 outage anchor", check_fig4_anchor),
    ("worker-count invariance", check_worker_invariance),
]

FULL_CHECKS = FAST_CHECKS + [
    ("closed form vs Monte Carlo E[C_w]", check_fig2_closed_form_vs_mc),
    ("fast vs nested Monte Carlo outage", check_fast_vs_slow),
]


def validate(level="fast"):
    """Run the check suite; returns a list of :class:`CheckResult`."""
    checks = {"fast": FAST_CHECKS, "full": FULL_CHECKS}[level]
    report = []
    for name, fn in checks:
        start = time.time()
        try:
            passed, measured = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed report
            passed, measured = False, f"raised {type(exc).__name__}: {exc}"
        report.append(CheckResult(name, bool(passed), measured, time.time() - start))
    return report
