import math

import numpy as np
import pytest

from secrecy_outage.channel import ConfigError, Scheme, SystemConfig
from secrecy_outage.montecarlo import (
    OutageEstimate,
    estimate_outage,
    estimate_outage_slow_oracle,
    normal_half_width,
    write_trace,
)
from secrecy_outage.secrecy import outage_indicator, snr_relay
from secrecy_outage.wiretap import build_curve

TRAD = SystemConfig(M=4, rho2=0.9, P=2.0)
RELAY = SystemConfig(M=8, N=2, rho2=0.9, P=2.0, scheme=Scheme.RELAY)


@pytest.fixture(scope="module")
def trad_curve():
    return build_curve(TRAD)


@pytest.fixture(scope="module")
def relay_curve():
    return build_curve(RELAY, rng=np.random.default_rng(4))


def test_huge_target_rate_always_outage(trad_curve):
    est = estimate_outage(TRAD.replace(Rs=50.0), trad_curve, 10_000, seed=1)
    assert est.p_out == 1.0


def test_uncorrelated_regression_value():
    # Eve's SNR is identically zero at rho2 = 0, so every trial with g_B > 0
    # succeeds; a 1e6-trial run recorded exactly zero outages
    config = SystemConfig(M=8, rho2=0.0, P=2.0)
    est = estimate_outage(config, build_curve(config), 100_000, seed=20261016)
    assert est.p_out == 0.0
    assert est.p_out < 0.05


def test_fig4_anchor_quick(trad_curve):
    config = TRAD.replace(rho2=1.0)
    est = estimate_outage(config, build_curve(config), 100_000, seed=3)
    assert abs(est.p_out - 0.63) <= 0.05


def test_ci_consistency(trad_curve):
    est = estimate_outage(TRAD, trad_curve, 5_000, seed=2)
    assert est.ci95_half_width == pytest.approx(1.959963984540054 * math.sqrt(est.p_out * (1 - est.p_out) / 5_000), abs=1e-12)
    assert est.outages == round(est.p_out * est.trials)
    lo, hi = est.wilson_interval()
    assert 0.0 <= lo < est.p_out < hi <= 1.0


def test_wilson_interval_near_zero():
    est = OutageEstimate(p_out=0.0, trials=10_000, ci95_half_width=0.0, seed=0)
    lo, hi = est.wilson_interval()
    assert lo == 0.0 and 0.0 < hi < 0.001


@pytest.mark.parametrize("workers", [2, 4])
def test_deterministic_across_workers(trad_curve, relay_curve, workers):
    for config, curve in ((TRAD, trad_curve), (RELAY, relay_curve)):
        a = estimate_outage(config, curve, 30_000, seed=11, workers=1)
        b = estimate_outage(config, curve, 30_000, seed=11, workers=workers)
        assert a == b


def test_seed_changes_result(trad_curve):
    a = estimate_outage(TRAD, trad_curve, 30_000, seed=1)
    b = estimate_outage(TRAD, trad_curve, 30_000, seed=2)
    assert a.p_out != b.p_out


def test_argument_validation(trad_curve):
    with pytest.raises(ValueError):
        estimate_outage(TRAD, trad_curve, 10, seed=1)
    with pytest.raises(ConfigError):
        estimate_outage(TRAD.replace(rho2=0.5), trad_curve, 1_000, seed=1)
    with pytest.raises(ValueError):
        estimate_outage_slow_oracle(TRAD, 10, 10_000, seed=1)


def test_trace_records_are_consistent(relay_curve, tmp_path):
    est = estimate_outage(RELAY, relay_curve, 2_000, seed=5, trace_rows=50)
    assert len(est.trace) == 50
    for rec in est.trace:
        snrs = snr_relay(rec.ratio, RELAY, rec.g_b, rec.g_e, rec.j_r)
        assert bool(outage_indicator(snrs, RELAY.Rs)) == rec.outage
    path = tmp_path / "trace.csv"
    write_trace(est.trace, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "g_b,g_e,j_r,ratio,outage" and len(lines) == 51


def combined_z(fast, slow):
    sigma = math.hypot(normal_half_width(fast.p_out, fast.trials), normal_half_width(slow.p_out, slow.trials)) / 1.959963984540054
    return abs(fast.p_out - slow.p_out) / sigma if sigma > 0 else (0.0 if fast.p_out == slow.p_out else math.inf)


def test_slow_oracle_uncorrelated_boundary():
    config = SystemConfig(M=4, rho2=0.0, P=2.0)
    fast = estimate_outage(config, build_curve(config), 10_000, seed=3)
    slow = estimate_outage_slow_oracle(config, 200, 10_000, seed=3, grid_resolution=101)
    assert fast.p_out == slow.p_out == 0.0


def test_slow_oracle_agrees_on_traditional(trad_curve):
    fast = estimate_outage(TRAD, trad_curve, 50_000, seed=8)
    slow = estimate_outage_slow_oracle(TRAD, 1_000, 10_000, seed=8, grid_resolution=201)
    assert combined_z(fast, slow) <= 3.0
