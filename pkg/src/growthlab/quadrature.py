"""Quadrature rules: nested periodic trapezoid and panelled tanh-sinh."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import QuadratureStall


@dataclass
class PeriodicResult:
    value: float
    nodes: int
    converged: bool
    min_sample: float
    delta: float


def periodic_mean(
    func: Callable[[np.ndarray], np.ndarray],
    initial_nodes: int = 64,
    max_nodes: int = 2**20,
    rel_tol: float = 1e-9,
    offset: float = 0.0,
) -> PeriodicResult:
    """Mean of a 2π-periodic function by the trapezoid rule with node doubling.

    Stops once two successive estimates differ by less than
    ``rel_tol * (1 + |estimate|)``; the doubled grid reuses all previous
    nodes.  Never raises: the caller decides what non-convergence means.
    """
    if initial_nodes < 8:
        raise ValueError("initial_nodes must be at least 8")
    n = initial_nodes
    theta = offset + 2.0 * np.pi * np.arange(n) / n
    vals = np.asarray(func(theta), dtype=float)
    total = math.fsum(vals)
    vmin = float(np.min(vals))
    est = total / n
    delta = math.inf
    while n < max_nodes:
        theta = offset + 2.0 * np.pi * (np.arange(n) + 0.5) / n
        vals = np.asarray(func(theta), dtype=float)
        total += math.fsum(vals)
        vmin = min(vmin, float(np.min(vals)))
        n *= 2
        new = total / n
        delta = abs(new - est)
        est = new
        if not math.isfinite(est):
            break
        if delta < rel_tol * (1.0 + abs(est)):
            return PeriodicResult(est, n, True, vmin, delta)
    return PeriodicResult(est, n, False, vmin, delta)


def _tanh_sinh_level(h: float, first: bool, t_max: float):
    """Abscissae offsets (xi_left, xi_right) and weights on (0, 1) for one level.

    On the first level all nodes j*h are returned, afterwards only odd ones.
    """
    jmax = int(math.ceil(t_max / h))
    j = np.arange(-jmax, jmax + 1)
    if not first:
        j = j[j % 2 != 0]
    t = j * h
    u = 0.5 * np.pi * np.sinh(t)
    with np.errstate(over="ignore"):
        xl = 1.0 / (1.0 + np.exp(-2.0 * u))
        xr = 1.0 / (1.0 + np.exp(2.0 * u))
    w = h * np.pi * np.cosh(t) * xl * xr
    keep = (xl > 0) & (xr > 0) & (w > 0)
    return xl[keep], xr[keep], w[keep]


# nodes closer than ~1e-150 to an endpoint are dropped
TANH_SINH_TMAX = 5.4


def tanh_sinh_panels(
    func: Callable[[np.ndarray, np.ndarray], np.ndarray],
    edges: Sequence[float],
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-300,
    max_level: int = 9,
) -> tuple[float, float]:
    """Integrate ``func`` over [edges[0], edges[-1]] ⊂ [0, 1] panel by panel.

    ``func(s, one_minus_s)`` receives both the abscissa and its complement,
    each computed without cancellation, so the integrand may be singular at
    0 or 1.  Every panel uses the tanh-sinh rule; levels are refined
    jointly until successive totals agree to ``rel_tol``.

    Returns ``(value, error_estimate)``; raises :class:`QuadratureStall` if
    ``max_level`` is reached first.
    """
    e = np.asarray(edges, dtype=float)
    if np.any(np.diff(e) < 0):
        raise ValueError("panel edges must be nondecreasing")
    a, b = e[:-1], e[1:]
    width = b - a
    keep = width > 0
    a, b, width = a[keep], b[keep], width[keep]
    if len(a) == 0:
        return 0.0, 0.0
    one_minus_b = 1.0 - b
    total = 0.0
    prev = None
    err = math.inf
    h = 1.0
    for level in range(max_level + 1):
        xl, xr, w = _tanh_sinh_level(h, level == 0, TANH_SINH_TMAX)
        s = a[:, None] + width[:, None] * xl[None, :]
        oms = one_minus_b[:, None] + width[:, None] * xr[None, :]
        vals = np.asarray(func(s.ravel(), oms.ravel()), dtype=float).reshape(s.shape)
        contrib = vals * (width[:, None] * w[None, :])
        bad = ~np.isfinite(contrib)
        if np.any(bad):
            raise QuadratureStall("integrand not finite at a quadrature node")
        level_sum = math.fsum(contrib.ravel())
        if level == 0:
            total = level_sum
        else:
            # halving h: old nodes keep their weight pattern, scaled by 1/2
            total = 0.5 * total + level_sum
        if prev is not None:
            err = abs(total - prev)
            if err <= rel_tol * abs(total) + abs_tol:
                return total, err
        prev = total
        h *= 0.5
    raise QuadratureStall(
        f"tanh-sinh did not reach rel_tol={rel_tol:g} within {max_level} levels "
        f"(last change {err:.3g})"
    )
