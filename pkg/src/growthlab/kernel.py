"""Paley kernel transform, Paley constants and the bounds built from them.

The kernel is  K_p(t) dt = p² t^(p-1) dt / (1 + t^p)²  on (0, ∞), of total
mass p.  With s = t^p / (1 + t^p) it becomes p ds on (0, 1), so

    ∫ φ(r t) K_p(t) dt = p ∫_0^1 φ(r (s / (1 - s))^(1/p)) ds.

All bounds are returned on the ln scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import Divergent, OriginPoint, TailUndeclared
from .points import PointDistribution, integral_count
from .profile import RadialProfile
from .quadrature import tanh_sinh_panels


@dataclass(frozen=True)
class KernelParams:
    p: float
    quad_rel_tol: float = 1e-10
    max_panels: int = 2048

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError(f"kernel exponent p must be >= 1, got {self.p}")
        if not self.quad_rel_tol > 0:
            raise ValueError("quad_rel_tol must be positive")
        if self.max_panels < 1:
            raise ValueError("max_panels must be positive")


@dataclass(frozen=True)
class PowerBudget:
    """A growth budget  φ(r) <= σ r^ρ + c."""

    sigma: float
    rho: float
    c: float = 0.0

    def __post_init__(self):
        if not (self.sigma > 0 and self.rho > 0):
            raise ValueError("PowerBudget needs sigma > 0 and rho > 0")


@dataclass(frozen=True)
class ExactProfile:
    """A radial function given by a vectorized callable.

    ``growth_order`` is the power growth of ``func`` at infinity (0 for
    logarithmic or bounded growth); ``breakpoints`` are radii where ``func``
    is not smooth and become panel edges in the kernel quadrature.
    """

    func: Callable[[np.ndarray], np.ndarray]
    growth_order: float
    breakpoints: tuple = ()
    left_value: float | None = None

    def __call__(self, t):
        return self.func(np.asarray(t, dtype=float))

    @property
    def value_at_zero(self) -> float:
        if self.left_value is not None:
            return float(self.left_value)
        return float(np.asarray(self.func(np.array([0.0])))[0])


def power_profile(rho: float, sigma: float = 1.0, c: float = 0.0) -> ExactProfile:
    """φ(t) = σ t^ρ + c."""
    return ExactProfile(lambda t: sigma * t**rho + c, rho, (), c)


def constant_profile(c: float) -> ExactProfile:
    return ExactProfile(lambda t: np.full(np.shape(t), float(c)), 0.0, (), c)


def paley_constant(rho: float) -> float:
    """P(ρ) = πρ for ρ >= 1/2 and πρ / sin(πρ) for 0 < ρ < 1/2."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    if rho >= 0.5:
        return math.pi * rho
    return math.pi * rho / math.sin(math.pi * rho)


def optimal_p(rho: float) -> float:
    """max{1, 2ρ}, the exponent at which the kernel bound gives P(ρ)."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    return max(1.0, 2.0 * rho)


def _growth_order(phi) -> float:
    if isinstance(phi, RadialProfile):
        if phi.extrapolation == "forbidden":
            raise TailUndeclared("profile has no declared tail; the kernel integral needs one")
        return float(phi.growth_order)
    return float(phi.growth_order)


def convergence_check(phi, p: float) -> bool:
    """True iff ∫_1^∞ φ(t) t^(-p-1) dt converges for the declared tail.

    Power tails converge exactly when the exponent is below p; constant and
    logarithmic tails always do.
    """
    return _growth_order(phi) < p


def _edges(phi, r: float, p: float, max_panels: int) -> np.ndarray:
    b = np.asarray(getattr(phi, "breakpoints", ()), dtype=float)
    b = b[b > 0]
    if len(b) > max_panels - 1:
        idx = np.unique(np.linspace(0, len(b) - 1, max_panels - 1).round().astype(int))
        b = b[idx]
    with np.errstate(over="ignore", divide="ignore"):
        s = 1.0 / (1.0 + (r / b) ** p)
    s = s[(s > 0) & (s < 1)]
    return np.unique(np.concatenate(([0.0], s, [1.0])))


# growth ratio ρ/p above which the last panel is integrated in the tail variable
TAIL_SUBSTITUTION_MIN = 0.5
# radius beyond which a profile is replaced by its declared power asymptotics
T_FAR = 1e100


def kernel_transform(phi, p: float, r: float, params: KernelParams | None = None) -> float:
    """∫_0^∞ φ(r t) p² t^(p-1) / (1 + t^p)² dt.

    ``phi`` is a :class:`RadialProfile` with a declared tail or an
    :class:`ExactProfile`.  At r = 0 the value is p φ(0).

    When ρ/p > 1/2 the last panel is integrated in a variable that absorbs
    the (1 - s)^(-ρ/p) endpoint growth, and beyond φ-argument ``T_FAR`` the
    profile is taken to be C t^ρ exactly (true for declared power tails).
    """
    params = params or KernelParams(p)
    if params.p != p:
        params = KernelParams(p, params.quad_rel_tol, params.max_panels)
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if not convergence_check(phi, p):
        raise Divergent(
            f"kernel integral diverges: profile grows like t^{_growth_order(phi):g} with p = {p:g}"
        )
    if r == 0:
        return p * phi.value_at_zero
    inv_p = 1.0 / p

    def integrand(s, one_minus_s):
        with np.errstate(divide="ignore"):
            t = r * np.exp(inv_p * (np.log(s) - np.log(one_minus_s)))
        return np.asarray(phi(t), dtype=float)

    edges = _edges(phi, r, p, params.max_panels)
    a = max(_growth_order(phi), 0.0) * inv_p
    if a <= TAIL_SUBSTITUTION_MIN:
        value, _ = tanh_sinh_panels(integrand, edges, rel_tol=params.quad_rel_tol)
        return p * value
    # beyond the last breakpoint φ(t) ~ t^ρ makes the integrand ~ (1 - s)^(-a);
    # with 1 - s = v^k, k = 1/(1 - a), the tail integrand becomes bounded
    s_n = max(float(edges[-2]), 0.5)
    head = np.append(edges[edges < s_n], s_n)
    value, _ = tanh_sinh_panels(integrand, head, rel_tol=params.quad_rel_tol)
    k = 1.0 / (1.0 - a)
    log_V = math.log1p(-s_n) / k
    # below y_far the argument of φ exceeds T_FAR; there φ is taken as C t^ρ
    log_y_far = p * (math.log(r) - math.log(T_FAR)) / k - log_V
    if log_y_far >= 0.0:
        return p * value

    def tail(y, _one_minus_y):
        log_v = log_V + np.log(y)
        vk = np.exp(k * log_v)
        t = r * np.exp(inv_p * (np.log1p(-vk) - k * log_v))
        jac = k * np.exp(log_V + (k - 1.0) * log_v)
        return np.asarray(phi(t), dtype=float) * jac

    tail_value, _ = tanh_sinh_panels(tail, [math.exp(log_y_far), 1.0], rel_tol=params.quad_rel_tol)
    rho = a * p
    C = float(np.asarray(phi(np.array([T_FAR])))[0]) / T_FAR**rho
    # p C r^ρ ∫_X^∞ x^a dx/(1+x)^2 with X = (T_FAR/r)^p; X is huge, so the
    # incomplete beta integral is u0^(1-a)/(1-a) with u0 = 1/(1+X) to double precision
    log_u0 = -p * (math.log(T_FAR) - math.log(r))
    far_value = C * r**rho * math.exp((1.0 - a) * log_u0) / (1.0 - a)
    return p * (value + tail_value + far_value)


def transform_many(phi, p: float, radii: Sequence[float], params: KernelParams | None = None) -> np.ndarray:
    return np.array([kernel_transform(phi, p, float(r), params) for r in radii])


def power_bound(budget: PowerBudget, p: float, r: float) -> float:
    """Closed form of the transform of σ t^ρ + c:  σ r^ρ ρπ / sin(ρπ/p) + c p."""
    if p <= budget.rho:
        raise Divergent(f"p = {p:g} must exceed rho = {budget.rho:g}")
    if r < 0:
        raise ValueError("radius must be nonnegative")
    a = budget.rho / p
    factor = budget.rho * math.pi / math.sin(math.pi * a)
    return budget.sigma * r**budget.rho * factor + budget.c * p


def _with_tail(profile, rho: float | None):
    if isinstance(profile, RadialProfile) and profile.extrapolation == "forbidden":
        return profile.with_fitted_tail(rho)
    return profile


def _as_profile(radii, values) -> RadialProfile:
    radii = np.asarray(radii, dtype=float)
    order = np.argsort(radii)
    return RadialProfile(radii[order], np.asarray(values)[order], extrapolation="forbidden")


def _positive_radii(radii) -> list[float]:
    radii = [float(r) for r in radii]
    if not radii or min(radii) <= 0:
        raise ValueError("bound radii must be positive; the r = 0 value is p times phi(0)")
    return radii


def _bound(profile, p, radii, params, tail_order):
    prof = _with_tail(profile, tail_order)
    radii = _positive_radii(radii)
    return _as_profile(radii, transform_many(prof, p, radii, params))


def theorem1_bound(C_profile, p: float, radii: Sequence[float], params=None, tail_order: float | None = None):
    """ln of the bound on M(r; f h) from the circle-mean profile of f.

    Profiles without a declared tail get a power tail fitted on their top
    decade; ``tail_order`` overrides the fitted exponent.
    """
    return _bound(C_profile, p, radii, params, tail_order)


def counting_profile(Z: PointDistribution) -> ExactProfile:
    """N_Z as an exact profile; beyond the last point it grows like Z^rad ln t."""
    if Z.origin_multiplicity:
        raise OriginPoint("N_Z profile needs Z(0) = 0")

    def N(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        pos = t > 0
        if np.any(pos):
            out[pos] = np.asarray(integral_count(Z, t[pos]), dtype=float)
        return out

    moduli = tuple(np.unique(Z.moduli)) if len(Z) else ()
    return ExactProfile(N, 0.0, moduli, 0.0)


def counting_transform(Z: PointDistribution, p: float, r):
    """Kernel transform of N_Z in closed form: Σ m ln(1 + (r/|a|)^p).

    Each point contributes the transform of m ln⁺(rt/|a|), which with
    x = t^p integrates to m ln(1 + (r/|a|)^p).
    """
    if Z.origin_multiplicity:
        raise OriginPoint("N_Z transform needs Z(0) = 0")
    if not p >= 1:
        raise ValueError("p must be >= 1")
    r = np.asarray(r, dtype=float)
    if len(Z) == 0:
        return np.zeros(r.shape)[()]
    ratio = r.reshape(-1, 1) / Z.moduli[None, :]
    with np.errstate(over="ignore"):
        terms = np.where(
            ratio > 1.0,
            p * np.log(ratio) + np.log1p(ratio ** (-p)),
            np.log1p(ratio**p),
        )
    out = terms @ Z.multiplicities.astype(float)
    return out.reshape(r.shape)[()]


def theorem2_bound(
    Z: PointDistribution, p: float, radii: Sequence[float], params=None, method: str = "closed"
):
    """ln of the bound on M(r; f) for an entire f with zeros Z, via N_Z.

    ``method="quadrature"`` runs the generic kernel quadrature on the exact
    N_Z profile instead of the closed form.
    """
    if Z.origin_multiplicity:
        raise OriginPoint("the counting-function bound needs Z(0) = 0")
    if method == "quadrature":
        return _bound(counting_profile(Z), p, radii, params, None)
    if method != "closed":
        raise ValueError("method must be 'closed' or 'quadrature'")
    radii = _positive_radii(radii)
    return _as_profile(radii, np.atleast_1d(counting_transform(Z, p, radii)))


def theorem3_bound(T_profile, p: float, radii: Sequence[float], params=None, tail_order: float | None = None):
    """ln of the bound on max{M(r; f), M(r; g)} from T(r; f/g)."""
    return _bound(T_profile, p, radii, params, tail_order)


__all__ = [
    "KernelParams",
    "PowerBudget",
    "ExactProfile",
    "power_profile",
    "constant_profile",
    "paley_constant",
    "optimal_p",
    "convergence_check",
    "kernel_transform",
    "transform_many",
    "power_bound",
    "counting_profile",
    "counting_transform",
    "theorem1_bound",
    "theorem2_bound",
    "theorem3_bound",
]
