"""Scenario configuration and channel realizations.

The main (Alice->Bob) and wiretap (Alice->Eve) vectors are built with an
exactly prescribed squared correlation ``rho2`` per draw, while their norms
stay independent. Relay links are plain i.i.d. Rayleigh vectors.
"""

import enum
import hashlib
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np
from scipy import linalg

from .special_math import sample_gamma


class Scheme(str, enum.Enum):
    TRADITIONAL = "traditional"  # beamforming + AN at Alice
    RELAY = "relay"  # beamforming at Alice + AN from the jamming relay


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SystemConfig:
    """All parameters of one scenario.

    ``P`` is linear (noise power is 1); use :meth:`from_db` for dB input.
    """

    M: int = 4
    N: int = 2
    P: float = 10 ** 0.3
    rho2: float = 0.9
    sigma2_ab: float = 0.5
    sigma2_ae: float = 0.5
    sigma2_rb: float = 0.5
    sigma2_re: float = 0.5
    Rs: float = 0.0
    scheme: Scheme = Scheme.TRADITIONAL

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if int(self.M) != self.M or self.M < 1:
            raise ConfigError(f"M must be a positive integer, got {self.M}")
        if int(self.N) != self.N or self.N < 1:
            raise ConfigError(f"N must be a positive integer, got {self.N}")
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "N", int(self.N))
        if not self.P > 0 or math.isinf(self.P):
            raise ConfigError(f"P must be positive and finite, got {self.P}")
        if not 0.0 <= self.rho2 <= 1.0:
            raise ConfigError(f"rho2 must lie in [0, 1], got {self.rho2}")
        for name in ("sigma2_ab", "sigma2_ae", "sigma2_rb", "sigma2_re"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if not self.Rs >= 0:
            raise ConfigError(f"Rs must be nonnegative, got {self.Rs}")
        if self.scheme is Scheme.RELAY and self.N < 2:
            raise ConfigError("the relay scheme needs N >= 2 relay antennas")

    @classmethod
    def from_db(cls, power_db, **kwargs):
        return cls(P=db_to_linear(power_db), **kwargs)

    @property
    def power_db(self):
        return 10.0 * math.log10(self.P)

    def replace(self, **changes):
        values = asdict(self)
        values.update(changes)
        return SystemConfig(**values)

    def digest(self, ignore=("Rs",)):
        """Stable token over the fields that determine expected wiretap curves.

        ``Rs`` does not enter E[C_w], so by default it is left out; curves can
        then be shared across a target-rate sweep. Relay fields are dropped
        for the traditional scheme, which never uses them.
        """
        skip = set(ignore)
        if self.scheme is Scheme.TRADITIONAL:
            skip |= {"N", "sigma2_rb", "sigma2_re"}
        items = sorted((k, v) for k, v in asdict(self).items() if k not in skip)
        text = ";".join(f"{k}={v.value if isinstance(v, Scheme) else repr(v)}" for k, v in items)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def db_to_linear(power_db):
    return 10.0 ** (float(power_db) / 10.0)


@dataclass
class ChannelRealization:
    h_ab: np.ndarray
    h_ae: np.ndarray
    h_rb: Optional[np.ndarray] = None
    h_re: Optional[np.ndarray] = None
    j_r: Optional[float] = None
    g_b: float = field(init=False)
    g_e: float = field(init=False)
    rho2_realized: float = field(init=False)

    def __post_init__(self):
        self.g_b = float(np.vdot(self.h_ab, self.h_ab).real)
        self.g_e = float(np.vdot(self.h_ae, self.h_ae).real)
        inner = np.vdot(self.h_ab, self.h_ae)
        self.rho2_realized = float(abs(inner) ** 2 / (self.g_b * self.g_e))


@dataclass
class AnVector:
    a: np.ndarray
    owner: str  # "alice" or "relay"


def complex_gaussian(rng, size, variance=1.0):
    """Circularly symmetric complex Gaussian entries with the given variance."""
    scale = math.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def null_space_basis(h):
    """Orthonormal K x (K-1) basis Z of the null space of h^H (h^H Z = 0)."""
    h = np.asarray(h, dtype=complex).ravel()
    if h.size < 2:
        raise ValueError("null space of a length-1 vector is empty")
    if not np.linalg.norm(h) > 0:
        raise ValueError("null space of the zero vector is undefined here")
    return linalg.null_space(h.conj()[None, :])


def _random_unit(basis, rng):
    v = complex_gaussian(rng, basis.shape[1])
    u = basis @ v
    return u / np.linalg.norm(u)


def make_an_vector(basis, rng, owner="alice"):
    """Complex Gaussian AN vector Z v spread evenly over the null space."""
    v = complex_gaussian(rng, basis.shape[1])
    return AnVector(a=basis @ v, owner=owner)


def sample_main_pair(config, rng):
    """Draw h_AB and h_AE with |<h_AB, h_AE>|^2 / (g_B g_E) equal to ``rho2``.

    h_AE = |h_AE| (rho u_AB + sqrt(1 - rho^2) u_perp), with u_perp an isotropic
    unit vector orthogonal to h_AB and |h_AE|^2 ~ Gamma(M, sigma2_ae) drawn
    independently of h_AB.
    """
    M = config.M
    h_ab = complex_gaussian(rng, M, config.sigma2_ab)
    u_ab = h_ab / np.linalg.norm(h_ab)
    rho = math.sqrt(config.rho2)
    direction = rho * u_ab
    if config.rho2 < 1.0:
        if M < 2:
            raise ConfigError("rho2 < 1 needs M >= 2")
        direction = direction + math.sqrt(1.0 - config.rho2) * _random_unit(null_space_basis(h_ab), rng)
    g_e = sample_gamma(M, config.sigma2_ae, rng)
    return ChannelRealization(h_ab=h_ab, h_ae=math.sqrt(g_e) * direction)


def jamming_gain(h_rb, h_re):
    """Squared norm of h_RE projected off h_RB, i.e. (1 - rho_R^2) |h_RE|^2."""
    u = h_rb / np.linalg.norm(h_rb)
    residual = h_re - u * np.vdot(u, h_re)
    return float(np.vdot(residual, residual).real)


def relay_correlation(h_rb, h_re):
    return float(abs(np.vdot(h_rb, h_re)) ** 2 / (np.vdot(h_rb, h_rb).real * np.vdot(h_re, h_re).real))


def sample_relay_channels(config, rng):
    """Draw independent h_RB, h_RE and the effective jamming gain j_R."""
    if config.N < 2:
        raise ConfigError("the relay needs N >= 2 antennas")
    h_rb = complex_gaussian(rng, config.N, config.sigma2_rb)
    h_re = complex_gaussian(rng, config.N, config.sigma2_re)
    return h_rb, h_re, jamming_gain(h_rb, h_re)


def sample_realization(config, rng):
    """Full vector-level draw for the configured scheme."""
    real = sample_main_pair(config, rng)
    if config.scheme is Scheme.RELAY:
        real.h_rb, real.h_re, real.j_r = sample_relay_channels(config, rng)
    return real


def sample_eve_stats(config, rng, size):
    """Sufficient statistics seen by Eve: g_E and, for the relay scheme, j_R.

    j_R is drawn directly as Gamma(N - 1, sigma2_re), the law of the squared
    projection of h_RE onto the (N-1)-dimensional null space of h_RB.
    """
    g_e = sample_gamma(config.M, config.sigma2_ae, rng, size)
    if config.scheme is Scheme.RELAY:
        return g_e, sample_gamma(config.N - 1, config.sigma2_re, rng, size)
    return g_e, None
