"""Sweep definitions, presets for the published figures, and CSV output."""

import enum
import math
import platform
import time
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .channel import ConfigError, Scheme, SystemConfig, db_to_linear
from .montecarlo import estimate_outage
from .wiretap import DEFAULT_GRID, DEFAULT_MC_SAMPLES, build_curve

CSV_HEADER = "axis,value,scheme,M,N,p_out,ci95,trials,seed"


class Axis(str, enum.Enum):
    RHO2 = "rho2"
    POWER_DB = "power_db"
    TARGET_RATE = "target_rate"


@dataclass(frozen=True)
class SweepSpec:
    axis: Axis
    points: Tuple[float, ...]
    base: SystemConfig
    schemes: Tuple[Scheme, ...] = (Scheme.TRADITIONAL, Scheme.RELAY)
    variants: Tuple[Tuple[int, int], ...] = ((4, 2),)
    trials: int = 100_000
    seed: int = 1
    grid_resolution: int = DEFAULT_GRID
    mc_samples: int = DEFAULT_MC_SAMPLES
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "axis", Axis(self.axis))
        object.__setattr__(self, "points", tuple(float(p) for p in self.points))
        object.__setattr__(self, "schemes", tuple(Scheme(s) for s in self.schemes))
        object.__setattr__(self, "variants", tuple((int(m), int(n)) for m, n in self.variants))
        if not self.points:
            raise ConfigError("a sweep needs at least one point")
        if list(self.points) != sorted(self.points):
            raise ConfigError("sweep points must be sorted")
        if not self.schemes or not self.variants:
            raise ConfigError("a sweep needs at least one scheme and one (M, N) variant")

    def row_config(self, value, scheme, M, N):
        changes = dict(M=M, N=N, scheme=scheme)
        if self.axis is Axis.RHO2:
            changes["rho2"] = value
        elif self.axis is Axis.POWER_DB:
            changes["P"] = db_to_linear(value)
        else:
            changes["Rs"] = value
        return self.base.replace(**changes)


@dataclass(frozen=True)
class SweepRow:
    axis: str
    value: float
    scheme: str
    M: int
    N: int
    p_out: float
    ci95: float
    trials: int
    seed: int

    def rounded(self):
        """The row as it reads back from CSV (6 significant digits)."""
        return replace(self, value=_round6(self.value), p_out=_round6(self.p_out), ci95=_round6(self.ci95))


@dataclass
class SweepResult:
    rows: List[SweepRow] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    curve_builds: int = 0


def _round6(x):
    return float(f"{x:.6g}")


def _curve_rng(seed, config):
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(config.digest(), 16)]))


def run_sweep(spec, workers=None, progress=None):
    """Run every (point, variant, scheme) row of ``spec``.

    Curves are cached by configuration digest, which leaves out ``Rs``, so a
    target-rate sweep builds one curve per (scheme, variant). Identical rows
    (e.g. traditional rows that differ only in the unused N) share results.
    """
    start = time.time()
    curves = {}
    estimates = {}
    result = SweepResult()
    for value in spec.points:
        for M, N in spec.variants:
            for scheme in spec.schemes:
                try:
                    config = spec.row_config(value, scheme, M, N)
                except ConfigError as exc:
                    raise ConfigError(f"{spec.axis.value}={value}, scheme={scheme.value}, M={M}, N={N}: {exc}") from exc
                key = config.digest()
                if key not in curves:
                    curves[key] = build_curve(
                        config,
                        grid_resolution=spec.grid_resolution,
                        mc_samples=spec.mc_samples,
                        rng=_curve_rng(spec.seed, config),
                    )
                    result.curve_builds += 1
                full_key = config.digest(ignore=())
                if full_key not in estimates:
                    estimates[full_key] = estimate_outage(config, curves[key], spec.trials, spec.seed, workers=workers)
                est = estimates[full_key]
                row = SweepRow(
                    axis=spec.axis.value,
                    value=value,
                    scheme=scheme.value,
                    M=M,
                    N=N,
                    p_out=est.p_out,
                    ci95=est.ci95_half_width,
                    trials=est.trials,
                    seed=est.seed,
                )
                result.rows.append(row)
                if progress is not None:
                    progress(row)
    result.metadata = {
        "sweep": spec.name or spec.axis.value,
        "version": __version__,
        "base": _describe(spec.base),
        "points": " ".join(f"{p:g}" for p in spec.points),
        "variants": " ".join(f"{m}x{n}" for m, n in spec.variants),
        "grid_resolution": spec.grid_resolution,
        "mc_samples": spec.mc_samples,
        "curve_builds": result.curve_builds,
        "python": platform.python_version(),
        "wall_time_s": f"{time.time() - start:.2f}",
    }
    return result


def _describe(config):
    return (
        f"power_db={config.power_db:.6g} rho2={config.rho2:g} target_rate_bits={config.Rs:g} "
        f"sigma2_ab={config.sigma2_ab:g} sigma2_ae={config.sigma2_ae:g} "
        f"sigma2_rb={config.sigma2_rb:g} sigma2_re={config.sigma2_re:g}"
    )


def format_csv(result):
    lines = [f"# {k}: {v}" for k, v in result.metadata.items()]
    lines.append(CSV_HEADER)
    for r in result.rows:
        lines.append(
            f"{r.axis},{r.value:.6g},{r.scheme},{r.M},{r.N},{r.p_out:.6g},{r.ci95:.6g},{r.trials},{r.seed}"
        )
    return "\n".join(lines) + "\n"


def emit_csv(result, path):
    with open(path, "w") as fh:
        fh.write(format_csv(result))


def parse_csv(text):
    """Inverse of :func:`format_csv`; returns a :class:`SweepResult`."""
    result = SweepResult()
    header_seen = False
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(":")
            result.metadata[key.strip()] = value.strip()
            continue
        if not header_seen:
            if line.strip() != CSV_HEADER:
                raise ValueError(f"unexpected CSV header: {line!r}")
            header_seen = True
            continue
        axis, value, scheme, M, N, p_out, ci95, trials, seed = line.split(",")
        result.rows.append(
            SweepRow(axis, float(value), scheme, int(M), int(N), float(p_out), float(ci95), int(trials), int(seed))
        )
    return result


def read_csv(path):
    with open(path) as fh:
        return parse_csv(fh.read())


def data_rows(text):
    """CSV lines without the ``#`` metadata block, for reproducibility checks."""
    return [line for line in text.splitlines() if line and not line.startswith("#")]


# ---------------------------------------------------------------------------
# presets

RHO2_POINTS = tuple(round(0.1 * i, 1) for i in range(11))
POWER_DB_POINTS = tuple(float(p) for p in range(0, 21, 2))
RATE_POINTS = tuple(round(0.1 * i, 1) for i in range(11))
M_VARIANTS = ((2, 2), (4, 2), (8, 2))
N_VARIANTS = ((8, 2), (8, 4), (8, 8))
DEFAULT_BASE = SystemConfig.from_db(3.0, rho2=0.9, Rs=0.0)

# Fig. 2 is a curve, not an outage sweep: E[C_w] against phi.
FIG2_CONFIG = DEFAULT_BASE.replace(M=4, rho2=0.9, scheme=Scheme.TRADITIONAL)

PRESETS = {
    "fig4": SweepSpec(Axis.RHO2, RHO2_POINTS, DEFAULT_BASE, variants=M_VARIANTS, name="fig4"),
    "fig5": SweepSpec(
        Axis.RHO2,
        RHO2_POINTS,
        DEFAULT_BASE.replace(sigma2_rb=1.0, sigma2_re=1.0),
        schemes=(Scheme.RELAY,),
        variants=M_VARIANTS,
        name="fig5",
    ),
    "fig6": SweepSpec(Axis.RHO2, RHO2_POINTS, DEFAULT_BASE, variants=N_VARIANTS, name="fig6"),
    "fig7": SweepSpec(Axis.POWER_DB, POWER_DB_POINTS, DEFAULT_BASE, variants=M_VARIANTS, name="fig7"),
    "fig8": SweepSpec(Axis.POWER_DB, POWER_DB_POINTS, DEFAULT_BASE.replace(rho2=1.0), variants=M_VARIANTS, name="fig8"),
    "fig9": SweepSpec(Axis.POWER_DB, POWER_DB_POINTS, DEFAULT_BASE, variants=N_VARIANTS, name="fig9"),
    "fig10": SweepSpec(Axis.TARGET_RATE, RATE_POINTS, DEFAULT_BASE, variants=M_VARIANTS, name="fig10"),
    "fig11": SweepSpec(Axis.TARGET_RATE, RATE_POINTS, DEFAULT_BASE, variants=N_VARIANTS, name="fig11"),
}

ALIASES = {
    "rho2-vs-m": "fig4",
    "rho2-relay-sigma1": "fig5",
    "rho2-vs-n": "fig6",
    "power-rho0.9-vs-m": "fig7",
    "power-rho1-vs-m": "fig8",
    "power-vs-n": "fig9",
    "rate-vs-m": "fig10",
    "rate-vs-n": "fig11",
}


def preset(name):
    key = ALIASES.get(name, name)
    if key not in PRESETS:
        known = ", ".join(sorted(PRESETS) + sorted(ALIASES))
        raise KeyError(f"unknown preset {name!r}; known presets: {known}")
    return PRESETS[key]


# ---------------------------------------------------------------------------
# config files

_CONFIG_KEYS = {
    "preset",
    "name",
    "axis",
    "points",
    "schemes",
    "variants",
    "scheme",
    "m",
    "n",
    "power_db",
    "rho2",
    "target_rate_bits",
    "sigma2_ab",
    "sigma2_ae",
    "sigma2_rb",
    "sigma2_re",
    "trials",
    "seed",
    "grid_resolution",
    "mc_samples",
}


def _floats(value):
    return [float(v) for v in value.replace(",", " ").split()]


def _variants(value):
    out = []
    for item in value.replace(",", " ").split():
        m, _, n = item.lower().partition("x")
        if not n:
            raise ConfigError(f"variant {item!r} must look like MxN, e.g. 4x2")
        out.append((int(m), int(n)))
    return out


def parse_config_text(text):
    """Parse flat ``key = value`` text into ``(SweepSpec or None, SystemConfig)``.

    ``power_db`` is the only way to give power; it is converted to linear
    scale here and nowhere else. A file without ``axis`` or ``preset``
    describes a single scenario (used by the ``curve`` command), in which case
    the spec is ``None``.
    """
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lower()
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        raw[key] = value.strip()

    spec = preset(raw["preset"]) if "preset" in raw else None
    base = spec.base if spec else DEFAULT_BASE
    changes = {}
    if "power_db" in raw:
        changes["P"] = db_to_linear(float(raw["power_db"]))
    for key in ("rho2", "sigma2_ab", "sigma2_ae", "sigma2_rb", "sigma2_re"):
        if key in raw:
            changes[key] = float(raw[key])
    if "target_rate_bits" in raw:
        changes["Rs"] = float(raw["target_rate_bits"])
    if "m" in raw:
        changes["M"] = int(raw["m"])
    if "n" in raw:
        changes["N"] = int(raw["n"])
    if "scheme" in raw:
        changes["scheme"] = Scheme(raw["scheme"])
    base = base.replace(**changes)

    if spec is None and "axis" not in raw:
        return None, base, raw

    fields = {}
    if "axis" in raw:
        fields["axis"] = Axis(raw["axis"])
    if "points" in raw:
        fields["points"] = _floats(raw["points"])
    if "schemes" in raw:
        fields["schemes"] = [Scheme(s) for s in raw["schemes"].replace(",", " ").split()]
    if "variants" in raw:
        fields["variants"] = _variants(raw["variants"])
    for key in ("trials", "seed", "grid_resolution", "mc_samples"):
        if key in raw:
            fields[key] = int(float(raw[key]))
    if "name" in raw:
        fields["name"] = raw["name"]
    if spec is None:
        if "points" not in fields:
            raise ConfigError("a sweep config needs 'points'")
        spec = SweepSpec(base=base, **fields)
    else:
        spec = replace(spec, base=base, **fields)
    return spec, base, raw


def load_config(path):
    with open(path) as fh:
        return parse_config_text(fh.read())
