"""Catalog of entire and meromorphic test functions.

Every spec evaluates in log-polar form: ``ln|f(z)|`` plus a unit phase, so
products of many factors and values of size exp(r**rho) stay representable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import special
from .errors import NonConvergentSeries, PoleHit, ZerosUnknown
from .points import PointDistribution, union

TARGET_REL_TOL = 1e-10
ZERO_THRESHOLD = 1e-300
_EPS = np.finfo(float).eps
_CHUNK = 2_000_000


@dataclass(frozen=True)
class EvalResult:
    value: complex
    log_abs: float
    est_rel_err: float
    warning: str | None = None


class FunctionSpec:
    """Base class; subclasses are immutable dataclasses."""

    is_entire = True

    @property
    def positive_coefficients(self) -> bool:
        return False

    def log_phase(self, z: np.ndarray):
        """Return ``(log_abs, phase, rel_err)`` arrays for complex ``z``."""
        raise NotImplementedError

    def zeros(self, radius: float) -> PointDistribution:
        raise ZerosUnknown(f"{type(self).__name__} does not expose its zeros")

    def describe(self) -> str:
        return repr(self)


def _from_value(v: np.ndarray):
    # the zero threshold applies to values computed in linear space only;
    # log-space results keep their exact (possibly very negative) logarithm
    a = np.abs(v)
    a = np.where(a < ZERO_THRESHOLD, 0.0, a)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_abs = np.log(a)
        phase = np.where(a > 0, v / np.where(a > 0, a, 1.0), 0.0)
    return log_abs, phase


def _coef_tuple(coefficients) -> tuple:
    out = tuple(complex(c) for c in coefficients)
    if not out:
        raise ValueError("at least one coefficient is required")
    return out


@dataclass(frozen=True)
class Polynomial(FunctionSpec):
    """Polynomial with coefficients listed from the highest degree down."""

    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _coef_tuple(self.coefficients))

    @property
    def positive_coefficients(self) -> bool:
        return all(c.imag == 0 and c.real >= 0 for c in self.coefficients)

    def log_phase(self, z):
        c = np.asarray(self.coefficients)
        v = np.polyval(c, z)
        log_abs, phase = _from_value(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            cond = np.polyval(np.abs(c), np.abs(z)) / np.abs(v)
        err = _EPS * len(c) * np.where(np.isfinite(cond), cond, np.inf)
        return log_abs, phase, err

    def zeros(self, radius):
        c = np.trim_zeros(np.asarray(self.coefficients), "f")
        if len(c) == 0:
            raise ZerosUnknown("the zero polynomial has no zero distribution")
        tail = len(c) - len(np.trim_zeros(c, "b"))
        roots = np.roots(np.trim_zeros(c, "b")) if len(c) - tail > 1 else np.zeros(0)
        return PointDistribution.from_points(roots, origin_multiplicity=tail).restrict(radius)

    def describe(self):
        return "poly:" + ",".join(_fmt(c) for c in self.coefficients)


@dataclass(frozen=True)
class ZeroForm(FunctionSpec):
    """leading * Π (z - a)^m over a finite zero distribution."""

    leading: complex
    zero_set: PointDistribution

    @property
    def positive_coefficients(self):
        lead = complex(self.leading)
        return (
            lead.imag == 0
            and lead.real > 0
            and bool(np.all((self.zero_set.points.imag == 0) & (self.zero_set.points.real < 0)))
        )

    def log_phase(self, z):
        log_abs = np.full(z.shape, math.log(abs(self.leading)) if self.leading else -np.inf)
        arg = np.full(z.shape, np.angle(self.leading))
        m0 = self.zero_set.origin_multiplicity
        with np.errstate(divide="ignore"):
            if m0:
                log_abs = log_abs + m0 * np.log(np.abs(z))
                arg = arg + m0 * np.angle(z)
            la, ar = _log_linear_factors(z, self.zero_set.points, self.zero_set.multiplicities)
        log_abs = log_abs + la
        arg = arg + ar
        phase = np.where(np.isneginf(log_abs), 0.0, np.exp(1j * arg))
        err = _EPS * (1.0 + 2.0 * self.zero_set.total) * np.ones(z.shape)
        return log_abs, phase, err

    def zeros(self, radius):
        return self.zero_set.restrict(radius)

    def describe(self):
        return f"zeroform:{_fmt(self.leading)}[{self.zero_set.total} zeros]"


def _log_linear_factors(z, pts, mult):
    """Σ m ln|z - a| and Σ m arg(z - a), chunked over the zero list."""
    la = np.zeros(z.shape)
    ar = np.zeros(z.shape)
    if len(pts) == 0:
        return la, ar
    zf = z.reshape(-1)
    step = max(1, _CHUNK // max(1, zf.size))
    la_f = la.reshape(-1)
    ar_f = ar.reshape(-1)
    with np.errstate(divide="ignore"):
        for i in range(0, len(pts), step):
            d = zf[:, None] - pts[None, i : i + step]
            la_f += np.log(np.abs(d)) @ mult[i : i + step]
            ar_f += np.angle(d) @ mult[i : i + step]
    return la_f.reshape(z.shape), ar_f.reshape(z.shape)


@dataclass(frozen=True)
class ExpPoly(FunctionSpec):
    """exp(P(z)) for a polynomial P given highest-degree first."""

    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _coef_tuple(self.coefficients))

    @property
    def positive_coefficients(self):
        *rest, const = self.coefficients
        return const.imag == 0 and all(c.imag == 0 and c.real >= 0 for c in rest)

    def log_phase(self, z):
        c = np.asarray(self.coefficients)
        p = np.polyval(c, z)
        err = _EPS * (1.0 + np.polyval(np.abs(c), np.abs(z)))
        return p.real, np.exp(1j * p.imag), err

    def zeros(self, radius):
        # exp(P) never vanishes
        return PointDistribution.empty()

    def describe(self):
        if self.coefficients == (1, 0):
            return "exp"
        return "exppoly:" + ",".join(_fmt(c) for c in self.coefficients)


def _sine_parts(z, scale):
    # sin(s z) = (-1)^k sin(s (z - z_k)) with z_k = k pi / s the nearest zero;
    # z - z_k is exact near z_k, so relative accuracy survives next to zeros
    k = np.round((scale * z).real / math.pi)
    w = scale * (z - k * math.pi / complex(scale))
    ls = special.log_sin(w)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    return ls.real, sign * np.exp(1j * ls.imag)


@dataclass(frozen=True)
class Sine(FunctionSpec):
    """sin(scale * z)."""

    scale: complex = math.pi

    def log_phase(self, z):
        w = self.scale * z
        log_abs, phase = _sine_parts(z, self.scale)
        hit = _structural_sine_hit(z, self.scale)
        log_abs = np.where(hit, -np.inf, log_abs)
        phase = np.where(hit, 0.0, phase)
        return log_abs, phase, _EPS * (1.0 + np.abs(w))

    def zeros(self, radius):
        step = math.pi / abs(self.scale)
        n = math.floor(radius / step + 1e-12)
        k = np.arange(1, n + 1)
        pts = np.concatenate((k, -k)) * math.pi / complex(self.scale)
        return PointDistribution.from_points(pts, origin_multiplicity=1).restrict(radius)

    def describe(self):
        return "sin:pi" if self.scale == math.pi else f"sin:{_fmt(self.scale)}"


def _structural_sine_hit(z, scale):
    k = np.round((scale * z).real / math.pi)
    return z == k * math.pi / complex(scale)


@dataclass(frozen=True)
class Sinc(FunctionSpec):
    """sin(scale * z) / (scale * z), equal to 1 at the origin."""

    scale: complex = math.pi

    def log_phase(self, z):
        w = self.scale * z
        log_abs = np.empty(z.shape)
        phase = np.empty(z.shape, dtype=complex)
        small = np.abs(w) < 1e-3
        ws = w[small]
        v = 1.0 - ws**2 / 6.0 + ws**4 / 120.0
        log_abs[small], phase[small] = _from_value(v)
        wl = w[~small]
        la, ph = _sine_parts(z[~small], self.scale)
        log_abs[~small] = la - np.log(np.abs(wl))
        phase[~small] = ph * np.exp(-1j * np.angle(wl))
        hit = _structural_sine_hit(z, self.scale) & ~small
        log_abs = np.where(hit, -np.inf, log_abs)
        phase = np.where(hit, 0.0, phase)
        return log_abs, phase, _EPS * (1.0 + np.abs(w))

    def zeros(self, radius):
        Z = Sine(self.scale).zeros(radius)
        return PointDistribution(Z.points, Z.multiplicities, 0)

    def describe(self):
        return "sinc:pi" if self.scale == math.pi else f"sinc:{_fmt(self.scale)}"


@dataclass(frozen=True)
class ReciprocalGamma(FunctionSpec):
    """z -> 1/Gamma(z + shift); shift = 1 gives 1/(z Gamma(z))."""

    shift: complex = 1.0

    def log_phase(self, z):
        w = z + self.shift
        lg = special.log_gamma(w)
        pole = np.isinf(lg.real)
        log_abs = np.where(pole, -np.inf, -lg.real)
        phase = np.where(pole, 0.0, np.exp(-1j * np.where(pole, 0.0, lg.imag)))
        err = 1e-15 * (1.0 + np.abs(w) * np.log1p(np.abs(w)))
        return log_abs, phase, err

    def zeros(self, radius):
        s = complex(self.shift)
        n = np.arange(0, math.floor(radius + abs(s)) + 1)
        pts = -s - n
        return PointDistribution.from_points(pts[np.abs(pts) <= radius])

    def describe(self):
        return "rgamma" if self.shift == 1 else f"rgamma:{_fmt(self.shift)}"


@dataclass(frozen=True)
class MittagLeffler(FunctionSpec):
    """E_rho(z; mu) = Σ z^k / Gamma(mu + k/rho)."""

    rho: float
    mu: float = 1.0

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("Mittag-Leffler order must be positive")

    @property
    def positive_coefficients(self):
        return self.mu > 0

    def log_phase(self, z):
        value, cond = special.mittag_leffler_series(self.rho, self.mu, z.reshape(-1))
        value = value.reshape(z.shape)
        cond = cond.reshape(z.shape)
        log_abs, phase = _from_value(value)
        step = 1.0 / self.rho
        base = 1e-15 if step != math.floor(step) else 0.0
        err = (special.ML_EPS * 8 + base) * cond
        return log_abs, phase, err

    def describe(self):
        return f"ml:{self.rho:g}" if self.mu == 1 else f"ml:{self.rho:g},{self.mu:g}"


@dataclass(frozen=True)
class Product(FunctionSpec):
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if any(not f.is_entire for f in self.factors):
            raise ValueError("Product factors must be entire; use Quotient for ratios")

    @property
    def positive_coefficients(self):
        return all(f.positive_coefficients for f in self.factors)

    def log_phase(self, z):
        log_abs = np.zeros(z.shape)
        phase = np.ones(z.shape, dtype=complex)
        err = np.zeros(z.shape)
        for f in self.factors:
            la, ph, er = f.log_phase(z)
            log_abs = log_abs + la
            phase = phase * ph
            err = err + er
        return log_abs, phase, err

    def zeros(self, radius):
        return union(*(f.zeros(radius) for f in self.factors))

    def describe(self):
        return "prod:" + "*".join(f.describe() for f in self.factors)


@dataclass(frozen=True)
class Quotient(FunctionSpec):
    numerator: FunctionSpec
    denominator: FunctionSpec

    is_entire = False

    def log_phase(self, z):
        ln, pn, en = self.numerator.log_phase(z)
        ld, pd, ed = self.denominator.log_phase(z)
        with np.errstate(invalid="ignore"):
            log_abs = ln - ld
        pole = np.isneginf(ld) & ~np.isneginf(ln)
        phase = np.where(np.isneginf(ln), 0.0, pn * np.conj(pd))
        phase = np.where(pole, 1.0, phase)
        log_abs = np.where(pole, np.inf, log_abs)
        return log_abs, phase, en + ed

    def zeros(self, radius):
        from .points import pole_distribution

        return pole_distribution(self.denominator.zeros(radius), self.numerator.zeros(radius))

    def poles(self, radius) -> PointDistribution:
        from .points import pole_distribution

        return pole_distribution(self.numerator.zeros(radius), self.denominator.zeros(radius))

    def describe(self):
        return f"quot:{self.numerator.describe()}|{self.denominator.describe()}"


def _fmt(c) -> str:
    c = complex(c)
    if c.imag == 0:
        return repr(c.real) if c.real != int(c.real) else str(int(c.real))
    return repr(c).strip("()")


# --- public operations ------------------------------------------------------


def log_phase(spec: FunctionSpec, z):
    """Vectorized ``(log_abs, phase, rel_err)``; log_abs is -inf exactly at zeros."""
    z = np.asarray(z, dtype=complex)
    log_abs, phase, err = spec.log_phase(z)
    phase = np.where(np.isneginf(log_abs), 0.0, phase)
    return log_abs, phase, err


def log_abs(spec: FunctionSpec, z) -> np.ndarray:
    """ln|f(z)| on an array of points."""
    return log_phase(spec, z)[0]


def evaluate(spec: FunctionSpec, z: complex) -> EvalResult:
    """Evaluate ``spec`` at one complex point.

    >>> r = evaluate(ExpPoly((1, 0)), 1.0)
    >>> round(r.log_abs, 12)
    1.0
    """
    za = np.asarray([complex(z)])
    la, ph, er = log_phase(spec, za)
    la, ph, er = float(la[0]), complex(ph[0]), float(er[0])
    if math.isnan(la):
        raise PoleHit(f"numerator and denominator both vanish at {z}")
    if la == math.inf:
        raise PoleHit(f"pole of {spec.describe()} at {z}")
    with np.errstate(over="ignore"):
        value = ph * math.exp(la) if la < 709.0 else ph * math.inf
    warning = None
    if er > TARGET_REL_TOL:
        warning = f"estimated relative error {er:.2e} exceeds target {TARGET_REL_TOL:g}"
    return EvalResult(value, la, er, warning)


def known_zeros(spec: FunctionSpec, radius: float) -> PointDistribution:
    """All zeros of ``spec`` in the closed disk of the given radius."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    return spec.zeros(radius)


def reciprocal_gamma(z: complex) -> complex:
    return complex(special.reciprocal_gamma(complex(z)))


def mittag_leffler(rho: float, mu: float, z: complex) -> complex:
    return complex(special.mittag_leffler(rho, mu, complex(z)))


def polynomial_from_roots(roots: Sequence[complex], leading: complex = 1.0) -> ZeroForm:
    return ZeroForm(leading, PointDistribution.from_points(roots))


def constant(c: complex) -> Polynomial:
    return Polynomial((c,))


EXP = ExpPoly((1, 0))


def catalog() -> dict[str, FunctionSpec]:
    """Reference entire functions with f(0) != 0 used by the verification suites."""
    from .products import CanonicalProductSpec

    return {
        "exp": EXP,
        "constant_2": constant(2.0),
        "z2_minus_1": Polynomial((1, 0, -1)),
        "(z-1)(z-2i)": polynomial_from_roots([1, 2j]),
        "sinc_pi": Sinc(math.pi),
        "rgamma_shift1": ReciprocalGamma(1.0),
        "ml_0.75": MittagLeffler(0.75),
        "ml_0.5": MittagLeffler(0.5),
        "exp_z2_plus_1": ExpPoly((1, 0, 1)),
        "canonical_pm_k_50": CanonicalProductSpec(
            PointDistribution.from_points(
                np.concatenate((np.arange(1, 51), -np.arange(1, 51))).astype(complex)
            ),
            1,
        ),
    }


__all__ = [
    "EvalResult",
    "FunctionSpec",
    "Polynomial",
    "ZeroForm",
    "ExpPoly",
    "Sine",
    "Sinc",
    "ReciprocalGamma",
    "MittagLeffler",
    "Product",
    "Quotient",
    "evaluate",
    "log_abs",
    "log_phase",
    "known_zeros",
    "reciprocal_gamma",
    "mittag_leffler",
    "polynomial_from_roots",
    "constant",
    "EXP",
    "catalog",
    "NonConvergentSeries",
]
