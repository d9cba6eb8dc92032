"""SNRs, capacities and the secrecy outage event for both schemes.

All functions accept scalars or numpy arrays for the channel statistics and
broadcast elementwise. Rates are in bits (log base 2).
"""

from typing import NamedTuple

import numpy as np

from .channel import ConfigError


class LinkSnrs(NamedTuple):
    snr_b: np.ndarray
    snr_e: np.ndarray


def _check_ratio(ratio):
    r = np.asarray(ratio, dtype=float)
    if np.any((r < 0) | (r > 1)) or np.any(np.isnan(r)):
        raise ValueError(f"allocation ratio must lie in [0, 1], got {ratio}")
    return r


def snr_traditional(phi, config, g_b, g_e):
    """Bob and Eve SNRs with beamforming and null-space AN at Alice.

    SNR_E uses the AN power averaged over the null space, which puts a
    (1 - rho^2) factor on Eve's noise term.
    """
    phi = _check_ratio(phi)
    P, rho2 = config.P, config.rho2
    snr_b = phi * P * g_b
    if config.M < 2:
        if np.any(phi < 1):
            raise ConfigError("M = 1 leaves no null space for AN; phi must be 1")
        an = 0.0
    else:
        an = (1.0 - phi) / (config.M - 1) * (1.0 - rho2) * P * g_e
    snr_e = phi * rho2 * P * g_e / (1.0 + an)
    return LinkSnrs(snr_b, snr_e)


def snr_relay(lam, config, g_b, g_e, j_r):
    """Bob and Eve SNRs when the relay jams in the null space of h_RB.

    ``j_r`` is the effective jamming gain (1 - rho_R^2) |h_RE|^2.
    """
    lam = _check_ratio(lam)
    if config.N < 2:
        raise ConfigError("the relay scheme needs N >= 2")
    P = config.P
    snr_b = lam * P * g_b
    snr_e = lam * config.rho2 * P * g_e / (1.0 + (1.0 - lam) / (config.N - 1) * P * j_r)
    return LinkSnrs(snr_b, snr_e)


def capacities(snrs):
    """Return ``(C_m, C_w)`` in bits."""
    return np.log2(1.0 + snrs.snr_b), np.log2(1.0 + snrs.snr_e)


def secrecy_capacity(c_m, c_w):
    return np.maximum(np.asarray(c_m) - c_w, 0.0)


def outage_indicator(snrs, Rs):
    """True where SNR_B - 2^Rs SNR_E - 2^Rs + 1 <= 0.

    Zero margin counts as outage: with no signal power at all (ratio 0) the
    expression is exactly 0 at Rs = 0, and nothing is delivered securely.
    """
    if Rs < 0:
        raise ValueError(f"target secrecy rate must be nonnegative, got {Rs}")
    k = 2.0 ** Rs
    # rearranged so Rs = 0 compares SNR_B <= SNR_E without rounding
    return snrs.snr_b - k * snrs.snr_e <= k - 1.0
