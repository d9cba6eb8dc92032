"""Secrecy outage simulation for nearly collinear main and wiretap channels.

Two schemes are modelled: beamforming with artificial noise at a multi-antenna
transmitter, and beamforming with a cooperative jamming relay that emits
noise in the null space of its own channel to the legitimate receiver.
"""

__version__ = "0.1.0"

from .channel import ConfigError, Scheme, SystemConfig  # noqa: E402
from .montecarlo import OutageEstimate, estimate_outage  # noqa: E402
from .wiretap import ExpectedWiretapCurve, build_curve  # noqa: E402

__all__ = [
    "ConfigError",
    "ExpectedWiretapCurve",
    "OutageEstimate",
    "Scheme",
    "SystemConfig",
    "build_curve",
    "estimate_outage",
]
