"""Expected wiretap capacity E[C_w] as a function of the allocation ratio.

For Alice-side AN the expectation over |h_AE|^2 ~ Gamma(M, sigma2_ae) has a
closed form through exponential integrals. With the jamming relay it also
averages over the jamming gain and is estimated by Monte Carlo. Either way it
depends only on the scenario statistics, so it is tabulated once per scenario
as an :class:`ExpectedWiretapCurve` and reused for every outage trial.
"""

import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from .channel import ConfigError, Scheme
from .special_math import gamma_log_integral_or_zero, sample_gamma


class CurveMethod(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    MONTE_CARLO = "monte_carlo"


DEFAULT_GRID = 1001
DEFAULT_MC_SAMPLES = 100_000


def an_alphas(phi, config):
    """Effective Gamma(M, 1) multipliers ``(alpha1, alpha2)`` of C_w1 and C_w2."""
    if config.M < 2:
        raise ConfigError("the closed form needs M >= 2")
    scale = config.sigma2_ae * config.P
    an = (1.0 - phi) / (config.M - 1) * (1.0 - config.rho2)
    return (an + phi * config.rho2) * scale, an * scale


def expected_cw_traditional(phi, config):
    """Closed-form E[C_w] (bits) for beamforming plus Alice-side AN."""
    phi = float(phi)
    if not 0.0 <= phi <= 1.0:
        raise ValueError(f"phi must lie in [0, 1], got {phi}")
    alpha1, alpha2 = an_alphas(phi, config)
    if alpha1 == alpha2:
        return 0.0
    c_w1 = gamma_log_integral_or_zero(alpha1, config.M)
    c_w2 = gamma_log_integral_or_zero(alpha2, config.M)
    return max(c_w1 - c_w2, 0.0)


def _relay_cw_samples(lam, config, g_e, j_r):
    jam = (1.0 - lam) / (config.N - 1) * config.P * j_r
    return np.log2(1.0 + lam * config.rho2 * config.P * g_e / (1.0 + jam))


def _draw_relay_stats(config, mc_samples, rng):
    g_e = sample_gamma(config.M, config.sigma2_ae, rng, mc_samples)
    j_r = sample_gamma(config.N - 1, config.sigma2_re, rng, mc_samples)
    return g_e, j_r


def expected_cw_relay(lam, config, mc_samples, rng):
    """Monte Carlo E[C_w] with relay jamming; returns ``(estimate, std_error)``."""
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    if config.N < 2:
        raise ConfigError("the relay scheme needs N >= 2")
    if mc_samples < 10_000:
        raise ValueError(f"mc_samples must be at least 1e4, got {mc_samples}")
    g_e, j_r = _draw_relay_stats(config, mc_samples, rng)
    c_w = _relay_cw_samples(lam, config, g_e, j_r)
    return float(c_w.mean()), float(c_w.std(ddof=1) / math.sqrt(mc_samples))


@dataclass(frozen=True, eq=False)
class ExpectedWiretapCurve:
    grid: np.ndarray
    values: np.ndarray
    method: CurveMethod
    mc_samples: int
    config_digest: str
    std_errors: np.ndarray = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.shape != values.shape or grid.ndim != 1:
            raise ValueError("grid and values must be 1-D arrays of equal length")
        if np.any(np.diff(grid) <= 0) or grid[0] != 0.0 or grid[-1] != 1.0:
            raise ValueError("grid must increase strictly from 0 to 1")
        errs = np.zeros_like(values) if self.std_errors is None else np.asarray(self.std_errors, dtype=float)
        for name, arr in (("grid", grid), ("values", values), ("std_errors", errs)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "method", CurveMethod(self.method))

    def __call__(self, ratio):
        """Piecewise-linear interpolation of E[C_w] at ``ratio``."""
        return np.interp(ratio, self.grid, self.values)

    def matches(self, config):
        return self.config_digest == config.digest()

    def to_text(self):
        buf = io.StringIO()
        buf.write(f"# method={self.method.value}\n")
        buf.write(f"# mc_samples={self.mc_samples}\n")
        buf.write(f"# config_digest={self.config_digest}\n")
        buf.write("ratio,value,std_error\n")
        for r, v, e in zip(self.grid, self.values, self.std_errors):
            buf.write(f"{float(r)!r},{float(v)!r},{float(e)!r}\n")
        return buf.getvalue()

    @classmethod
    def from_text(cls, text):
        meta = {}
        rows = []
        for line in text.splitlines():
            if not line.strip():
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key] = value
            elif line.startswith("ratio"):
                continue
            else:
                rows.append([float(x) for x in line.split(",")])
        data = np.array(rows)
        return cls(
            grid=data[:, 0],
            values=data[:, 1],
            std_errors=data[:, 2],
            method=meta["method"],
            mc_samples=int(meta["mc_samples"]),
            config_digest=meta["config_digest"],
        )


def ratio_grid(resolution, config):
    """Allocation-ratio grid from 0 to 1, denser near 0 at high SNR.

    Points are uniform in u = log(1 + K r) / log(1 + K), where K is Eve's mean
    full-power SNR P * sigma2_ae * M. The curvature of E[C_w] near r = 0 grows
    like K^2, and a uniform grid fine enough there would need ~1e5 points at
    20 dB; the warped grid keeps the piecewise-linear error uniformly small.
    For K -> 0 it reduces to the uniform grid.
    """
    u = np.linspace(0.0, 1.0, resolution)
    k = config.P * config.sigma2_ae * config.M
    grid = np.expm1(u * math.log1p(k)) / k
    grid[0], grid[-1] = 0.0, 1.0
    return grid


def build_curve(config, grid_resolution=DEFAULT_GRID, mc_samples=DEFAULT_MC_SAMPLES, rng=None):
    """Tabulate E[C_w] on :func:`ratio_grid` (includes both 0 and 1).

    The relay curve evaluates every grid point on one shared set of
    (g_E, j_R) draws. Each per-sample capacity is increasing in the ratio, so
    the tabulated curve is monotone and its noise is smooth along the grid.
    """
    if grid_resolution < 11:
        raise ValueError(f"grid_resolution must be at least 11, got {grid_resolution}")
    grid = ratio_grid(grid_resolution, config)
    if config.scheme is Scheme.TRADITIONAL:
        values = np.array([expected_cw_traditional(r, config) for r in grid])
        return ExpectedWiretapCurve(
            grid=grid,
            values=values,
            method=CurveMethod.CLOSED_FORM,
            mc_samples=0,
            config_digest=config.digest(),
        )
    if rng is None:
        raise ValueError("the relay curve is estimated by Monte Carlo and needs an rng")
    if mc_samples < 10_000:
        raise ValueError(f"mc_samples must be at least 1e4, got {mc_samples}")
    g_e, j_r = _draw_relay_stats(config, mc_samples, rng)
    values = np.empty_like(grid)
    errors = np.empty_like(grid)
    for i, lam in enumerate(grid):
        c_w = _relay_cw_samples(lam, config, g_e, j_r)
        values[i] = c_w.mean()
        errors[i] = c_w.std(ddof=1) / math.sqrt(mc_samples)
    return ExpectedWiretapCurve(
        grid=grid,
        values=values,
        std_errors=errors,
        method=CurveMethod.MONTE_CARLO,
        mc_samples=mc_samples,
        config_digest=config.digest(),
    )
