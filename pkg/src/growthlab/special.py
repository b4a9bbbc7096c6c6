"""Gamma-family functions and the Mittag-Leffler series.

Gamma uses the g=7, n=9 Lanczos coefficients with the reflection formula
for Re z < 1/2.  The Mittag-Leffler series is summed in extended precision
(``numpy.longdouble``) so that moderate cancellation on the negative axis
does not eat the double-precision result.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import NonConvergentSeries

_LANCZOS_G = 7
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)

# Mittag-Leffler series controls.
ML_MAX_EXPONENT = 700.0
ML_STOP_TOL = 1e-18
ML_STOP_RUN = 3
_LD_EPS = float(np.finfo(np.longdouble).eps)


def log_sin(w):
    """Complex logarithm of sin(w), stable for large |Im w|.

    The imaginary part is *an* argument of sin(w), not necessarily the
    principal one; only ``exp`` of the result is meaningful.
    """
    w = np.asarray(w, dtype=complex)
    y = w.imag
    out = np.empty(w.shape, dtype=complex)
    small = np.abs(y) < 20.0
    with np.errstate(divide="ignore", invalid="ignore"):
        out[small] = np.log(np.sin(w[small]))
        up = (~small) & (y > 0)
        wu = w[up]
        # sin w = (i/2) e^{-iw} (1 - e^{2iw})
        out[up] = np.log(0.5j) - 1j * wu + np.log1p(-np.exp(2j * wu))
        dn = (~small) & (y <= 0)
        wd = w[dn]
        # sin w = (-i/2) e^{iw} (1 - e^{-2iw})
        out[dn] = np.log(-0.5j) + 1j * wd + np.log1p(-np.exp(-2j * wd))
    return out


def log_sin_pi(z):
    """log sin(pi z), reduced by the nearest integer k so that relative
    accuracy is kept next to the zeros: sin(pi z) = (-1)^k sin(pi (z - k))."""
    z = np.asarray(z, dtype=complex)
    k = np.round(z.real)
    return log_sin(np.pi * (z - k)) + 1j * np.pi * np.mod(k, 2.0)


def _lanczos_log_gamma_right(z):
    # valid for Re z >= 1/2
    zm = z - 1.0
    acc = np.full(z.shape, _LANCZOS_COEF[0], dtype=complex)
    for i in range(1, _LANCZOS_G + 2):
        acc = acc + _LANCZOS_COEF[i] / (zm + i)
    t = zm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm + 0.5) * np.log(t) - t + np.log(acc)


def _nonpositive_integer(z):
    z = np.asarray(z, dtype=complex)
    return (z.imag == 0.0) & (z.real <= 0.0) & (z.real == np.round(z.real))


def log_gamma(z):
    """Complex log-Gamma (branch unspecified in the imaginary part).

    Returns ``+inf`` at the poles z = 0, -1, -2, ...
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty(z.shape, dtype=complex)
    poles = _nonpositive_integer(z)
    right = (z.real >= 0.5) & ~poles
    left = (z.real < 0.5) & ~poles
    out[poles] = np.inf
    out[right] = _lanczos_log_gamma_right(z[right])
    if np.any(left):
        zl = z[left]
        out[left] = _LOG_PI - log_sin_pi(zl) - _lanczos_log_gamma_right(1.0 - zl)
    return out[0] if scalar else out


def gamma(z):
    """Gamma function for complex (or real) arguments."""
    z_arr = np.asarray(z)
    lg = log_gamma(z_arr)
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.where(np.isinf(lg.real), complex(np.inf, 0.0), np.exp(lg))
    if np.isrealobj(z_arr):
        out = out.real
    return out[()] if np.ndim(out) == 0 else out


def log_abs_reciprocal_gamma(z):
    """ln|1/Gamma(z)|, equal to -inf at the nonpositive integers."""
    return -np.real(log_gamma(z))


def reciprocal_gamma(z):
    """1/Gamma(z); exactly zero at z = 0, -1, -2, ...

    >>> float(reciprocal_gamma(1.0).real)
    1.0
    """
    z = np.asarray(z, dtype=complex)
    lg = log_gamma(z)
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.where(np.isinf(lg.real), 0j, np.exp(-lg))
    return out[()] if out.ndim == 0 else out


def _gamma_real_ld(x: float) -> np.longdouble:
    """Gamma(x) for real x in extended precision; inf at poles.

    The argument is shifted into [1, 2) and the shift undone with exact
    rising/falling products; only the base value on [1, 2) goes through
    Lanczos (skipped when the base is exactly 1).
    """
    if x <= 0 and x == math.floor(x):
        return np.longdouble(np.inf)
    n = math.floor(x)
    base = x - n + 1.0
    if base == 1.0:
        g = np.longdouble(1)
    else:
        g = np.longdouble(np.exp(_lanczos_log_gamma_right(np.array([base + 0j]))[0].real))
    shift = n - 1  # x = base + shift
    if shift > 0:
        acc = np.longdouble(1)
        b = np.longdouble(base)
        for j in range(shift):
            acc *= b + j
        g *= acc
    elif shift < 0:
        acc = np.longdouble(1)
        xv = np.longdouble(x)
        for j in range(-shift):
            acc *= xv + j
        g /= acc
    return g


@lru_cache(maxsize=64)
def _ml_coefficients(rho: float, mu: float, n_terms: int) -> np.ndarray:
    """1/Gamma(mu + k/rho) for k < n_terms in extended precision."""
    out = np.zeros(n_terms, dtype=np.longdouble)
    step = 1.0 / rho
    int_step = step == math.floor(step)
    prev_gamma = None
    for k in range(n_terms):
        x = mu + k * step
        if x <= 0 and x == math.floor(x):
            out[k] = 0
            prev_gamma = None
            continue
        if int_step and prev_gamma is not None and x - step > 0:
            acc = prev_gamma
            xv = np.longdouble(mu) + np.longdouble(k - 1) * np.longdouble(step)
            for j in range(int(step)):
                acc *= xv + j
            g = acc
        else:
            g = _gamma_real_ld(x)
        prev_gamma = g
        out[k] = 0 if not np.isfinite(g) else 1 / g
    return out


def ml_term_cap(rho: float, abs_z: float) -> int:
    # the floor covers large rho, where Gamma(mu + k/rho) grows slowly in k
    return int(10 * (1 + rho * abs_z**rho + abs_z) + 40 * (rho + 1))


def mittag_leffler_series(rho: float, mu: float, z):
    """Sum the series Σ z^k / Gamma(mu + k/rho).

    Returns ``(value, condition)`` arrays where ``condition`` is
    Σ|term| / |value| (``inf`` when the value is 0), a multiplier for the
    rounding error of the summation.
    """
    if not rho > 0:
        raise ValueError("Mittag-Leffler order must be positive")
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    az = np.abs(z)
    if np.any(az**rho > ML_MAX_EXPONENT):
        raise NonConvergentSeries(
            f"|z|^rho exceeds {ML_MAX_EXPONENT}; the direct series would overflow"
        )
    cap = ml_term_cap(rho, float(az.max(initial=0.0)))
    coef = _ml_coefficients(float(rho), float(mu), cap + 1)
    zl = z.astype(np.clongdouble)
    total = np.zeros(z.shape, dtype=np.clongdouble)
    abs_total = np.zeros(z.shape, dtype=np.longdouble)
    power = np.ones(z.shape, dtype=np.clongdouble)
    run = np.zeros(z.shape, dtype=int)
    done = np.zeros(z.shape, dtype=bool)
    for k in range(cap + 1):
        c = coef[k]
        if c != 0:
            term = power * c
            total += np.where(done, 0, term)
            abs_total += np.where(done, 0, np.abs(term))
            small = np.abs(term) <= ML_STOP_TOL * np.abs(total)
            run = np.where(small, run + 1, 0)
            done |= run >= ML_STOP_RUN
            if done.all():
                break
        power = power * zl
        if not np.all(np.isfinite(power[~done])):
            raise NonConvergentSeries("series terms overflowed extended precision")
    else:
        if not done.all():
            raise NonConvergentSeries(
                f"Mittag-Leffler series did not meet tolerance within {cap} terms"
            )
    value = total.astype(complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = (abs_total / np.abs(total)).astype(float)
    return value, cond


def mittag_leffler(rho: float, mu: float, z):
    """E_rho(z; mu) = Σ_k z^k / Gamma(mu + k/rho) (Dzhrbashyan normalization).

    Terms whose Gamma argument is a nonpositive integer contribute 0.
    """
    z_arr = np.asarray(z, dtype=complex)
    value, _ = mittag_leffler_series(rho, mu, z_arr)
    return value[0] if z_arr.ndim == 0 else value.reshape(z_arr.shape)


ML_EPS = _LD_EPS
