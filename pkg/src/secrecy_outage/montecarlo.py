"""Monte Carlo estimation of the secrecy outage probability.

Each trial draws the main-channel gain, picks the allocation ratio against
the cached E[C_w] curve, draws Eve's statistics and records the outage event.
Trials are grouped in fixed-size blocks; block ``b`` gets its own generator
seeded from ``(seed, b)``, so the estimate depends only on ``(config, curve,
trials, seed)`` and not on how many workers process the blocks.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .allocation import optimize_ratio, optimize_ratios
from .channel import ConfigError, Scheme, sample_eve_stats
from .secrecy import outage_indicator, snr_relay, snr_traditional
from .special_math import sample_gamma
from .wiretap import DEFAULT_GRID, CurveMethod, ExpectedWiretapCurve, ratio_grid

BLOCK_SIZE = 8192
Z95 = 1.959963984540054
WORKERS_ENV = "SECRECY_OUTAGE_WORKERS"


@dataclass(frozen=True)
class TrialRecord:
    g_b: float
    g_e: float
    j_r: Optional[float]
    ratio: float
    outage: bool


@dataclass(frozen=True)
class OutageEstimate:
    """Outage fraction with a 95% normal-approximation half-width.

    The normal interval is poor when ``p_out`` is near 0 or 1; see
    :meth:`wilson_interval` for small probabilities.
    """

    p_out: float
    trials: int
    ci95_half_width: float
    seed: int
    outages: int = 0
    trace: List[TrialRecord] = field(default_factory=list, compare=False, repr=False)

    @property
    def std_error(self):
        return self.ci95_half_width / Z95

    def wilson_interval(self, z=Z95):
        n = self.trials
        p = self.p_out
        denom = 1.0 + z * z / n
        centre = (p + z * z / (2 * n)) / denom
        half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
        return max(centre - half, 0.0), min(centre + half, 1.0)


def normal_half_width(p, trials):
    return Z95 * math.sqrt(p * (1.0 - p) / trials)


def default_workers():
    value = os.environ.get(WORKERS_ENV)
    return max(int(value), 1) if value else 1


def block_rng(seed, block):
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(block)]))


def _snrs(config, ratio, g_b, g_e, j_r):
    if config.scheme is Scheme.RELAY:
        return snr_relay(ratio, config, g_b, g_e, j_r)
    return snr_traditional(ratio, config, g_b, g_e)


def _run_block(config, curve, n, rng):
    g_b = sample_gamma(config.M, config.sigma2_ab, rng, n)
    ratio, _ = optimize_ratios(g_b, curve, config.P)
    g_e, j_r = sample_eve_stats(config, rng, n)
    outage = outage_indicator(_snrs(config, ratio, g_b, g_e, j_r), config.Rs)
    return g_b, g_e, j_r, ratio, outage


def _blocks(trials, block_size):
    full, rest = divmod(trials, block_size)
    sizes = [block_size] * full
    if rest:
        sizes.append(rest)
    return sizes


def _trace_records(block_results, limit):
    records = []
    for g_b, g_e, j_r, ratio, outage in block_results:
        for i in range(len(g_b)):
            if len(records) >= limit:
                return records
            records.append(
                TrialRecord(
                    g_b=float(g_b[i]),
                    g_e=float(g_e[i]),
                    j_r=None if j_r is None else float(j_r[i]),
                    ratio=float(ratio[i]),
                    outage=bool(outage[i]),
                )
            )
    return records


def estimate_outage(config, curve, trials, seed, workers=None, block_size=BLOCK_SIZE, trace_rows=0):
    """Estimate P(C_s <= Rs) with per-trial optimal power allocation.

    Parameters
    ----------
    config : SystemConfig
    curve : ExpectedWiretapCurve
        Must have been built for ``config`` (``Rs`` aside).
    trials : int
        At least 1000.
    seed : int
    workers : int, optional
        Thread count; does not change the result.
    trace_rows : int
        Keep up to this many :class:`TrialRecord` rows on the result.
    """
    if int(trials) != trials or trials < 1000:
        raise ValueError(f"trials must be an integer >= 1000, got {trials}")
    if not curve.matches(config):
        raise ConfigError("expected wiretap curve was built for a different configuration")
    workers = default_workers() if workers is None else max(int(workers), 1)
    sizes = _blocks(int(trials), block_size)

    def run(args):
        b, n = args
        return _run_block(config, curve, n, block_rng(seed, b))

    if workers == 1:
        results = [run(item) for item in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, enumerate(sizes)))
    outages = sum(int(np.count_nonzero(r[4])) for r in results)
    p = outages / trials
    return OutageEstimate(
        p_out=p,
        trials=int(trials),
        ci95_half_width=normal_half_width(p, trials),
        seed=int(seed),
        outages=outages,
        trace=_trace_records(results, trace_rows) if trace_rows else [],
    )


def _nested_curve(config, rng, inner_samples, grid):
    g_e, j_r = sample_eve_stats(config, rng, inner_samples)
    values = np.empty_like(grid)
    for i, r in enumerate(grid):
        snr_e = _snrs(config, r, 0.0, g_e, j_r).snr_e
        values[i] = np.log2(1.0 + snr_e).mean()
    return ExpectedWiretapCurve(
        grid=grid,
        values=values,
        method=CurveMethod.MONTE_CARLO,
        mc_samples=inner_samples,
        config_digest=config.digest(),
    )


def estimate_outage_slow_oracle(config, trials, inner_samples, seed, grid_resolution=DEFAULT_GRID):
    """Outage estimate recomputing E[C_w] by nested Monte Carlo in every trial.

    Slow reference for :func:`estimate_outage`: no closed form and no shared
    curve, just a fresh inner simulation of Eve's statistics per trial. Uses
    streams disjoint from the fast path for the same seed.
    """
    if int(trials) != trials or trials < 100:
        raise ValueError(f"trials must be an integer >= 100, got {trials}")
    grid = ratio_grid(grid_resolution, config)
    root = np.random.SeedSequence([int(seed), 0x51_0E])
    outages = 0
    for child in root.spawn(int(trials)):
        rng = np.random.default_rng(child)
        g_b = sample_gamma(config.M, config.sigma2_ab, rng)
        curve = _nested_curve(config, rng, inner_samples, grid)
        ratio = optimize_ratio(g_b, curve, config).ratio
        g_e, j_r = sample_eve_stats(config, rng, 1)
        outages += bool(outage_indicator(_snrs(config, ratio, g_b, g_e, j_r), config.Rs)[0])
    p = outages / trials
    return OutageEstimate(
        p_out=p,
        trials=int(trials),
        ci95_half_width=normal_half_width(p, trials),
        seed=int(seed),
        outages=outages,
    )


def write_trace(records, path):
    with open(path, "w") as fh:
        fh.write("g_b,g_e,j_r,ratio,outage\n")
        for rec in records:
            j_r = "" if rec.j_r is None else f"{rec.j_r:.6g}"
            fh.write(f"{rec.g_b:.6g},{rec.g_e:.6g},{j_r},{rec.ratio:.6g},{int(rec.outage)}\n")
