"""Per-realization power split maximizing C_m(r) - E[C_w](r).

The objective is a concave log term minus a tabulated curve, which need not
be concave overall. The optimizer scans the curve grid, then refines inside
the two grid cells adjacent to the best grid point with golden-section
search. Inside one cell the interpolated curve is linear, so the objective is
concave there and golden section finds the cell maximum.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import ConfigError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
RATIO_TOL = 1e-4
# refined points must beat the grid best by more than this to be taken
TIE_TOL = 1e-12


class Boundary(str, enum.Enum):
    INTERIOR = "interior"
    AT_ZERO = "at_zero"
    AT_ONE = "at_one"


@dataclass(frozen=True)
class AllocationResult:
    ratio: float
    objective: float
    boundary: Boundary


def objective(ratio, g_b, curve, power):
    """C_m(ratio) - E[C_w](ratio) in bits."""
    return np.log2(1.0 + ratio * power * g_b) - curve(ratio)


def golden_section_max(f, lo, hi, tol=RATIO_TOL):
    """Vectorized golden-section maximization of ``f`` on ``[lo, hi]``.

    ``lo`` and ``hi`` are arrays of bracket ends; ``f`` maps an array of
    abscissae to objective values elementwise. Returns ``(x, f(x))``.
    """
    a = np.array(lo, dtype=float)
    b = np.array(hi, dtype=float)
    width = float(np.max(b - a)) if a.size else 0.0
    iterations = 0 if width <= tol else int(math.ceil(math.log(tol / width) / math.log(INV_PHI)))
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1 = f(x1)
    f2 = f(x2)
    for _ in range(iterations):
        left = f1 >= f2  # keep [a, x2]; ties favour the smaller ratio
        b = np.where(left, x2, b)
        a = np.where(left, a, x1)
        xn = np.where(left, b - INV_PHI * (b - a), a + INV_PHI * (b - a))
        fn = f(xn)
        x1, x2, f1, f2 = (
            np.where(left, xn, x2),
            np.where(left, x1, xn),
            np.where(left, fn, f2),
            np.where(left, f1, fn),
        )
    x = 0.5 * (a + b)
    return x, f(x)


def optimize_ratios(g_b, curve, power, tol=RATIO_TOL):
    """Vectorized optimal ratios for an array of main-channel gains.

    Returns ``(ratios, objectives)``. Among equal objectives the smaller ratio
    wins, so ``g_b = 0`` deterministically yields ratio 0.
    """
    g_b = np.atleast_1d(np.asarray(g_b, dtype=float))
    grid, values = curve.grid, curve.values
    table = np.log2(1.0 + np.multiply.outer(g_b * power, grid)) - values
    idx = np.argmax(table, axis=1)  # first maximum, i.e. smallest ratio
    best_x = grid[idx]
    best_f = table[np.arange(g_b.size), idx]

    def f(x):
        return np.log2(1.0 + x * power * g_b) - curve(x)

    last = grid.size - 1
    for lo_idx, hi_idx in ((np.maximum(idx - 1, 0), idx), (idx, np.minimum(idx + 1, last))):
        active = lo_idx < hi_idx
        if not active.any():
            continue
        x, fx = golden_section_max(f, grid[lo_idx], grid[hi_idx], tol)
        better = active & (fx > best_f + TIE_TOL)
        best_x = np.where(better, x, best_x)
        best_f = np.where(better, fx, best_f)
    return best_x, best_f


def optimize_ratio(g_b, curve, config, tol=RATIO_TOL):
    """Optimal allocation ratio for one main-channel gain ``g_b``."""
    if not curve.matches(config):
        raise ConfigError("expected wiretap curve was built for a different configuration")
    if not g_b >= 0:
        raise ValueError(f"g_b must be nonnegative, got {g_b}")
    x, fx = optimize_ratios([g_b], curve, config.P, tol)
    ratio = float(x[0])
    if ratio == 0.0:
        boundary = Boundary.AT_ZERO
    elif ratio == 1.0:
        boundary = Boundary.AT_ONE
    else:
        boundary = Boundary.INTERIOR
    return AllocationResult(ratio=ratio, objective=float(fx[0]), boundary=boundary)
