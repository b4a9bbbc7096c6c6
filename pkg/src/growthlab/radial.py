"""Growth characteristics on circles and disks: ln M, C, B, T and checks on them."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from . import funcat
from .errors import ProfileCoverage, QuadratureStall, SingularityUnresolved, ZerosUnknown
from .funcat import FunctionSpec, Quotient
from .points import PointDistribution, integral_count
from .profile import POINTS_PER_DECADE, OrderType, RadialProfile, estimate_order_type, log_grid
from .quadrature import PeriodicResult, periodic_mean, tanh_sinh_panels

log = logging.getLogger(__name__)

ANGULAR_GRID = 256
_SMALL_LOG = math.log(1e-8)
_NODE_GAP = 1e-6
_NEIGHBOUR_ANGLE = 1e-5


@dataclass(frozen=True)
class CircleQuadratureSettings:
    initial_nodes: int = 64
    max_nodes: int = 2**20
    rel_tol: float = 1e-9
    singularity_margin: float = 1e-8
    proximity_rel_tol: float = 1e-7

    def __post_init__(self):
        if self.initial_nodes < 8:
            raise ValueError("initial_nodes must be at least 8")
        if not (self.rel_tol > 0 and self.proximity_rel_tol > 0):
            raise ValueError("tolerances must be positive")


DEFAULT_SETTINGS = CircleQuadratureSettings()


def _circle(r: float, theta: np.ndarray) -> np.ndarray:
    return r * np.exp(1j * theta)


def _value_at_zero(spec: FunctionSpec) -> float:
    return float(funcat.log_abs(spec, np.array([0j]))[0])


# --- maximum modulus --------------------------------------------------------


def max_modulus(spec: FunctionSpec, r: float, settings: CircleQuadratureSettings = DEFAULT_SETTINGS) -> float:
    """ln M(r; f), the maximum of ln|f| on the circle |z| = r."""
    if not spec.is_entire:
        raise ValueError("max_modulus needs an entire function")
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if r == 0:
        return _value_at_zero(spec)
    if spec.positive_coefficients:
        return float(funcat.log_abs(spec, np.array([complex(r)]))[0])
    n = ANGULAR_GRID
    h = 2.0 * np.pi / n
    theta = h * np.arange(n)
    vals = funcat.log_abs(spec, _circle(r, theta))
    best = float(np.max(vals))
    # refine every sampled local maximum within reach of the best one
    left, right = np.roll(vals, 1), np.roll(vals, -1)
    peaks = np.flatnonzero((vals >= left) & (vals >= right) & np.isfinite(vals))
    peaks = peaks[np.argsort(vals[peaks])[::-1][:8]]
    for i in peaks:
        best = max(best, _zoom_max(spec, r, theta[i], h, settings.rel_tol))
    return best


def _zoom_max(spec, r, center, half_width, rel_tol, points=17):
    best_val = -np.inf
    width = half_width
    while width > 1e-14:
        theta = center + np.linspace(-width, width, points)
        vals = funcat.log_abs(spec, _circle(r, theta))
        j = int(np.argmax(vals))
        improvement = vals[j] - best_val
        center, best_val = theta[j], max(best_val, float(vals[j]))
        width = 2.0 * width / (points - 1)
        if 0 <= improvement < 1e-3 * rel_tol * (1.0 + abs(best_val)) and width < 1e-9:
            break
    return best_val


# --- circle means -----------------------------------------------------------


def _structural(spec: FunctionSpec, radius: float):
    """(zeros, poles) near-circle candidates, or (None, None) if unknown."""
    try:
        if isinstance(spec, Quotient):
            return spec.numerator.zeros(radius), spec.denominator.zeros(radius)
        return spec.zeros(radius), PointDistribution.empty()
    except ZerosUnknown:
        return None, None


def _near_circle(Z: PointDistribution | None, r: float, band: float):
    if Z is None or len(Z) == 0:
        return np.zeros(0, complex), np.zeros(0, int)
    near = np.abs(Z.moduli - r) <= band
    return Z.points[near], Z.multiplicities[near]


def _exact_factor_mean(pts, mult, r):
    # mean of ln|z - a| over |z| = r
    return float(np.sum(mult * np.maximum(math.log(r), np.log(np.abs(pts)))))


def _circle_mean_log_result(spec, r, settings, positive_part=False):
    band = settings.singularity_margin * r
    zeros, poles = _structural(spec, r + band)
    zp, zm = _near_circle(zeros, r, band)
    pp, pm = _near_circle(poles, r, band)
    exact = 0.0
    if not positive_part:
        exact = _exact_factor_mean(zp, zm, r) - _exact_factor_mean(pp, pm, r)
    removing = not positive_part and (len(zp) or len(pp))

    def integrand(theta):
        z = _circle(r, theta)
        la = funcat.log_abs(spec, z)
        if positive_part:
            if np.any(la == np.inf):
                raise SingularityUnresolved(f"pole on the circle |z| = {r:g}")
            return np.maximum(la, 0.0)
        if removing:
            la = _remove_factors(spec, r, theta, la, zp, zm, pp, pm)
        return la

    tol = settings.proximity_rel_tol if positive_part else settings.rel_tol
    if positive_part:
        if len(pp):
            raise SingularityUnresolved(f"pole within the margin of |z| = {r:g}")
        wide = 1e-3 * r
        zw = _near_circle(zeros, r, wide)[0]
        pw = _near_circle(poles, r, wide)[0]
        if len(zw) or len(pw):
            value = _proximity_panels(spec, r, np.concatenate((zw, pw)), tol)
            return PeriodicResult(value, 0, True, -np.inf, 0.0)
    res = periodic_mean(integrand, settings.initial_nodes, settings.max_nodes, tol)
    if not res.converged and positive_part:
        value = _proximity_panels(spec, r, np.zeros(0, complex), tol)
        return PeriodicResult(value, 0, True, res.min_sample, 0.0)
    if not res.converged:
        if res.min_sample < _SMALL_LOG or not math.isfinite(res.value):
            raise SingularityUnresolved(
                f"circle mean at r={r:g} did not converge; |f| nearly vanishes on the circle"
            )
        raise QuadratureStall(
            f"circle mean at r={r:g} did not converge within {settings.max_nodes} nodes"
        )
    return PeriodicResult(res.value + exact, res.nodes, True, res.min_sample, res.delta)


_KINK_SCAN = 4096


def _proximity_panels(spec, r, singular, rel_tol):
    """Mean of ln⁺|f| on |z| = r split at singular angles and at |f| = 1.

    Between consecutive edges ln⁺|f| is smooth, and at a zero or pole angle
    the logarithmic blow-up sits on a panel edge, where tanh-sinh copes.
    """
    two_pi = 2.0 * np.pi

    def la(theta):
        return funcat.log_abs(spec, _circle(r, np.asarray(theta, dtype=float)))

    sing = np.mod(np.angle(singular), two_pi) if len(singular) else np.zeros(0)
    eps = 1e-13
    scan = np.concatenate(
        (two_pi * np.arange(_KINK_SCAN + 1) / _KINK_SCAN, sing - eps, sing + eps)
    )
    scan = np.unique(np.clip(scan, 0.0, two_pi))
    vals = la(scan)
    kinks = []
    for i in np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0):
        a, b = scan[i], scan[i + 1]
        if np.any((sing > a) & (sing < b)) or not (np.isfinite(vals[i]) and np.isfinite(vals[i + 1])):
            continue
        kinks.append(brentq(lambda t: float(la(np.array([t]))[0]), a, b, xtol=1e-15, rtol=1e-15))
    edges = np.unique(np.concatenate(([0.0], sing, kinks, [two_pi]))) / two_pi

    def integrand(s, _one_minus_s):
        return np.maximum(la(two_pi * s), 0.0)

    try:
        value, _ = tanh_sinh_panels(integrand, edges, rel_tol=rel_tol * 1e-2, abs_tol=rel_tol * 1e-3)
    except QuadratureStall as exc:
        raise QuadratureStall(f"proximity at r={r:g}: {exc}") from exc
    return value


def _remove_factors(spec, r, theta, la, zp, zm, pp, pm):
    def strip(th, base):
        z = _circle(r, th)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = base.copy()
            for a, m in zip(zp, zm):
                out -= m * np.log(np.abs(z - a))
            for b, m in zip(pp, pm):
                out += m * np.log(np.abs(z - b))
        return out

    out = strip(theta, la)
    z = _circle(r, theta)
    removed = np.concatenate((zp, pp))
    gap = np.min(np.abs(z[:, None] - removed[None, :]), axis=1)
    bad = ~np.isfinite(out) | (gap < _NODE_GAP * r)
    if np.any(bad):
        # too close to a removed point for ln|f| to be accurate there; the
        # remainder is analytic, so average it at two nearby angles
        d = _NEIGHBOUR_ANGLE
        th = theta[bad]
        lo = strip(th - d, funcat.log_abs(spec, _circle(r, th - d)))
        hi = strip(th + d, funcat.log_abs(spec, _circle(r, th + d)))
        out[bad] = 0.5 * (lo + hi)
    return out


def circle_mean_log(spec: FunctionSpec, r: float, settings: CircleQuadratureSettings = DEFAULT_SETTINGS) -> float:
    """C(r; f) = (1/2π)∫ ln|f(re^{iθ})| dθ, with C(0; f) = ln|f(0)|.

    Known zeros (and poles) closer than ``singularity_margin * r`` to the
    circle are integrated exactly; each factor (z - a) contributes
    max(ln r, ln|a|).
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if r == 0:
        return _value_at_zero(spec)
    return _circle_mean_log_result(spec, r, settings).value


def circle_mean(func: Callable[[np.ndarray], np.ndarray], r: float, rel_tol: float = 1e-9, max_nodes: int = 2**20) -> float:
    """(1/2π)∫ u(re^{iθ}) dθ for an arbitrary vectorized u(z)."""
    if r == 0:
        return float(np.asarray(func(np.array([0j])))[0])
    res = periodic_mean(lambda th: func(_circle(r, th)), 64, max_nodes, rel_tol)
    if not res.converged:
        raise QuadratureStall(f"circle mean at r={r:g} did not converge")
    return res.value


def proximity(spec: FunctionSpec, r: float, settings: CircleQuadratureSettings = DEFAULT_SETTINGS) -> float:
    """(1/2π)∫ ln⁺|F(re^{iθ})| dθ; kinks of ln⁺ are left to node doubling."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if r == 0:
        return max(_value_at_zero(spec), 0.0)
    return _circle_mean_log_result(spec, r, settings, positive_part=True).value


def poles_of(F: FunctionSpec, radius: float) -> PointDistribution:
    if isinstance(F, Quotient):
        return F.poles(radius)
    return PointDistribution.empty()


def nevanlinna_T(F: FunctionSpec, r: float, settings: CircleQuadratureSettings = DEFAULT_SETTINGS) -> float:
    """T(r; F) = proximity + N_{Pol_F}(r)."""
    m = proximity(F, r, settings)
    if r == 0:
        return m
    poles = poles_of(F, r)
    if poles.origin_multiplicity:
        raise ValueError("T(r; F) needs F(0) != ∞")
    return m + float(integral_count(poles, r)) if len(poles) else m


def jensen_residual(spec: FunctionSpec, r: float, settings: CircleQuadratureSettings = DEFAULT_SETTINGS) -> float:
    """C(r; f) - ln|f(0)| - N_{Zero_f}(r); zero up to quadrature error."""
    zeros = funcat.known_zeros(spec, r)
    f0 = _value_at_zero(spec)
    if not math.isfinite(f0):
        raise ValueError("Jensen residual needs f(0) != 0")
    if isinstance(spec, Quotient):
        N = float(integral_count(zeros, r)) - float(integral_count(spec.poles(r), r))
    else:
        N = float(integral_count(zeros, r)) if zeros.total else 0.0
    return circle_mean_log(spec, r, settings) - f0 - N


# --- disk mean --------------------------------------------------------------


def _segment_moment(A, B, t0, t1):
    # ∫_{t0}^{t1} (A + B ln t) t dt
    def F(t):
        return A * t * t / 2.0 + B * (t * t / 2.0 * math.log(t) - t * t / 4.0)

    return F(t1) - F(t0)


def disk_mean(C_profile: RadialProfile, r: float) -> float:
    """B(r) = (2/r²)∫_0^r C(t) t dt for the piecewise profile, in closed form."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    v0 = C_profile.value_at_zero
    if r == 0:
        return v0
    g, v = C_profile.grid, C_profile.values
    total = 0.0
    # [0, min(r, g0)]: linear in t
    t = min(r, g[0])
    slope = (v[0] - v0) / g[0]
    total += v0 * t * t / 2.0 + slope * t**3 / 3.0
    for i in range(len(g) - 1):
        if g[i] >= r:
            break
        t0, t1 = g[i], min(g[i + 1], r)
        B = (v[i + 1] - v[i]) / math.log(g[i + 1] / g[i])
        A = v[i] - B * math.log(g[i])
        total += _segment_moment(A, B, t0, t1)
    if r > g[-1]:
        total += _tail_moment(C_profile, g[-1], r)
    return 2.0 * total / (r * r)


def _tail_moment(prof: RadialProfile, t0: float, t1: float) -> float:
    kind = prof.extrapolation
    if kind == "forbidden":
        raise ProfileCoverage(f"disk mean at r={t1:g} beyond profile grid end {t0:g}")
    if kind == "constant":
        return prof.values[-1] * (t1 * t1 - t0 * t0) / 2.0
    if kind == "log":
        B = prof.tail_coefficient
        A = prof.values[-1] - B * math.log(t0)
        return _segment_moment(A, B, t0, t1)
    a = prof.tail_exponent + 2.0
    return prof.tail_coefficient * (t1**a - t0**a) / a


# --- profiles ---------------------------------------------------------------


def characteristic_grid(radii: Sequence[float], per_decade: int = POINTS_PER_DECADE) -> np.ndarray:
    """Log grid reaching two decades below the smallest radius, merged with ``radii``."""
    radii = np.asarray([r for r in radii if r > 0], dtype=float)
    lo, hi = radii.min() / 100.0, radii.max()
    base = log_grid(lo, hi, per_decade) if hi > lo else np.array([hi])
    return np.unique(np.concatenate((base, radii)))


def circle_mean_profile(
    spec: FunctionSpec,
    grid: Sequence[float],
    settings: CircleQuadratureSettings = DEFAULT_SETTINGS,
    extrapolation: str = "forbidden",
) -> RadialProfile:
    """Sampled C(r; f) with left value ln|f(0)|."""
    return RadialProfile.sample(
        lambda r: circle_mean_log(spec, r, settings),
        grid,
        left_value=_value_at_zero(spec),
        extrapolation=extrapolation,
    )


def max_modulus_profile(spec: FunctionSpec, grid: Sequence[float], settings=DEFAULT_SETTINGS) -> RadialProfile:
    return RadialProfile.sample(lambda r: max_modulus(spec, r, settings), grid, _value_at_zero(spec))


def characteristic_T_profile(F: FunctionSpec, grid: Sequence[float], settings=DEFAULT_SETTINGS) -> RadialProfile:
    return RadialProfile.sample(
        lambda r: nevanlinna_T(F, r, settings), grid, left_value=max(_value_at_zero(F), 0.0)
    )


# --- chain ------------------------------------------------------------------


@dataclass
class ChainReport:
    radii: np.ndarray
    u0: float
    B: np.ndarray
    C: np.ndarray
    lnM: np.ndarray
    T: np.ndarray
    slacks: dict = field(default_factory=dict)

    @property
    def max_violation(self) -> float:
        """Largest amount by which any inequality fails (0 if none does)."""
        worst = 0.0
        for s in self.slacks.values():
            worst = max(worst, float(np.max(-s, initial=0.0)))
        return worst

    @property
    def min_slack(self) -> float:
        return min(float(np.min(s)) for s in self.slacks.values())


def chain_check(
    spec: FunctionSpec,
    radii: Sequence[float],
    settings: CircleQuadratureSettings = DEFAULT_SETTINGS,
) -> ChainReport:
    """u(0) <= B <= C <= ln M and C⁺ <= T <= (ln M)⁺ for u = ln|f|.

    Violations are reported in the returned slacks (negative entries), not
    raised.
    """
    radii = np.asarray(radii, dtype=float)
    u0 = _value_at_zero(spec)
    if not math.isfinite(u0):
        raise ValueError("chain_check needs f(0) != 0")
    grid = characteristic_grid(radii)
    Cprof = circle_mean_profile(spec, grid, settings)
    C = np.array([circle_mean_log(spec, r, settings) if r > 0 else u0 for r in radii])
    B = np.array([disk_mean(Cprof, r) for r in radii])
    M = np.array([max_modulus(spec, r, settings) for r in radii])
    T = np.array([nevanlinna_T(spec, r, settings) for r in radii])
    slacks = {
        "u0<=B": B - u0,
        "B<=C": C - B,
        "C<=lnM": M - C,
        "C+<=T": T - np.maximum(C, 0.0),
        "T<=lnM+": np.maximum(M, 0.0) - T,
    }
    return ChainReport(radii, u0, B, C, M, T, slacks)


# --- lemma inequality -------------------------------------------------------


def lemma22_check(C_profile, u_at_1: float, p: float, params=None) -> float:
    """Margin  p∫ C(t) d(t^p)/(1+t^p)² - u(1)  of the circle-mean bound at r = 1.

    The caller is responsible for u >= 0 being subharmonic, harmonic near
    the origin and of zero type over the order p; none of that is checked.
    """
    from .kernel import kernel_transform

    return kernel_transform(C_profile, p, 1.0, params) - u_at_1


__all__ = [
    "CircleQuadratureSettings",
    "RadialProfile",
    "OrderType",
    "max_modulus",
    "circle_mean_log",
    "circle_mean",
    "disk_mean",
    "proximity",
    "nevanlinna_T",
    "jensen_residual",
    "chain_check",
    "estimate_order_type",
    "lemma22_check",
    "log_grid",
]
