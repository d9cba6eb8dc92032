"""Exponential integrals, Gamma-averaged log capacities and Gamma sampling.

The closed-form expected capacities reduce to

    E[log2(1 + a X)] = exp(1/a) / ln 2 * sum_{n=1}^{N} E_n(1/a),   X ~ Gamma(N, 1)

For small ``a`` the factor exp(1/a) overflows while E_n(1/a) underflows, so
everything below works with the scaled function e^x E_n(x).
"""

import math

import numpy as np
from scipy import integrate

EULER_GAMMA = 0.5772156649015329
MAX_ORDER = 64
# E_1 evaluation switches from the power series to the continued fraction here.
SERIES_CUTOFF = 1.0

_EPS = 1e-16
_MAX_ITER = 10_000
_TINY = 1e-300


class ConvergenceError(ArithmeticError):
    """Raised when an iterative evaluation fails to converge."""


def _check_order(n):
    if int(n) != n or n < 1:
        raise ValueError(f"exponential integral order must be a positive integer, got {n!r}")
    if n > MAX_ORDER:
        raise ValueError(f"exponential integral order {n} exceeds the supported maximum {MAX_ORDER}")
    return int(n)


def _e1_series(x):
    # E_1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    total = 0.0
    term = 1.0
    for k in range(1, _MAX_ITER):
        term *= -x / k
        contrib = term / k
        total += contrib
        if abs(contrib) < _EPS * max(abs(total), 1e-300):
            return -EULER_GAMMA - math.log(x) - total
    raise ConvergenceError(f"E_1 series did not converge at x={x}")


def _scaled_cf(n, x):
    """e^x E_n(x) by modified Lentz evaluation of the continued fraction (x >= 1)."""
    b = x + n
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        a = -i * (n - 1 + i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ConvergenceError(f"E_{n} continued fraction did not converge at x={x}")


def scaled_exp_int_orders(n_max, x):
    """Return ``[e^x E_1(x), ..., e^x E_{n_max}(x)]``.

    Below the series cutoff E_1 comes from its power series and higher orders
    follow from the upward recurrence E_{n+1} = (e^-x - x E_n) / n, which is
    stable there. Above it the recurrence loses digits to cancellation, so
    every order gets its own continued fraction.
    """
    n_max = _check_order(n_max)
    x = float(x)
    if x < 0 or math.isnan(x):
        raise ValueError(f"exponential integral argument must be nonnegative, got {x}")
    if x == 0.0:
        raise ValueError("E_1 diverges at x = 0")
    if x >= SERIES_CUTOFF:
        return [_scaled_cf(n, x) for n in range(1, n_max + 1)]
    ex = math.exp(x)
    out = [ex * _e1_series(x)]
    for n in range(1, n_max):
        out.append((1.0 - x * out[-1]) / n)
    return out


def exp_int(n, x):
    """Generalized exponential integral E_n(x) = int_1^inf t^-n e^(-x t) dt.

    Parameters
    ----------
    n : int
        Order, 1 <= n <= 64.
    x : float
        Argument, x >= 0 (x > 0 when n = 1).

    Returns
    -------
    float
    """
    n = _check_order(n)
    x = float(x)
    if x < 0 or math.isnan(x):
        raise ValueError(f"exponential integral argument must be nonnegative, got {x}")
    if x == 0.0:
        if n == 1:
            raise ValueError("E_1 diverges at x = 0")
        return 1.0 / (n - 1)
    if x > 700.0:
        # e^-x underflows; E_n(x) is below 1e-300 anyway
        return 0.0
    return math.exp(-x) * scaled_exp_int_orders(n, x)[-1]


def _check_shape(shape):
    if int(shape) != shape or shape < 1:
        raise ValueError(f"Gamma shape must be a positive integer, got {shape!r}")
    return int(shape)


def gamma_log_integral(alpha, shape):
    """E[log2(1 + alpha X)] for X ~ Gamma(shape, scale=1), in closed form."""
    shape = _check_shape(shape)
    alpha = float(alpha)
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    x = 1.0 / alpha
    if math.isinf(x):
        return 0.0
    return math.fsum(scaled_exp_int_orders(shape, x)) / math.log(2.0)


def gamma_log_integral_or_zero(alpha, shape):
    """Like :func:`gamma_log_integral` but returns 0 for ``alpha == 0``."""
    if alpha == 0:
        return 0.0
    return gamma_log_integral(alpha, shape)


def sample_gamma(shape, scale, rng, size=None):
    """Draw Gamma(shape, scale) variates for integer ``shape``.

    Implemented as a sum of ``shape`` exponential variates, which is exact for
    integer shape (squared norm of ``shape`` complex Gaussian entries of
    variance ``scale``).
    """
    shape = _check_shape(shape)
    if not scale > 0:
        raise ValueError(f"Gamma scale must be positive, got {scale}")
    if size is None:
        return float(scale * rng.standard_exponential(shape).sum())
    draws = rng.standard_exponential((*np.atleast_1d(size), shape))
    return scale * draws.sum(axis=-1)


def quad_log_gamma_oracle(alpha, shape, rtol=1e-11, limit=500):
    """Adaptive-quadrature value of E[log2(1 + alpha X)], X ~ Gamma(shape, 1).

    Independent of the exponential-integral route; used to validate
    :func:`gamma_log_integral`.
    """
    shape = _check_shape(shape)
    alpha = float(alpha)
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    log_norm = math.lgamma(shape)

    def integrand(x):
        if x == 0.0:
            return 0.0
        density = math.exp((shape - 1) * math.log(x) - x - log_norm)
        return math.log1p(alpha * x) / math.log(2.0) * density

    # split at the mode region so the tail piece stays well resolved
    split = float(shape + 10.0 * math.sqrt(shape))
    pieces = []
    for lo, hi in ((0.0, split), (split, math.inf)):
        value, err, info = integrate.quad(
            integrand, lo, hi, epsabs=0.0, epsrel=rtol, limit=limit, full_output=True
        )[:3]
        if err > 1e-9 * max(abs(value), 1e-300) and err > 1e-14:
            raise ConvergenceError(
                f"quadrature did not converge for alpha={alpha}, shape={shape}: "
                f"estimate {value}, error {err}, {info['last']} subintervals"
            )
        pieces.append(value)
    return math.fsum(pieces)
