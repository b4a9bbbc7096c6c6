"""Weierstrass primary factors and canonical products over a zero distribution."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GenusTooSmall, OriginPoint
from .funcat import FunctionSpec
from .points import PointDistribution, lattice_zeros

_EPS = np.finfo(float).eps
_CHUNK = 2_000_000
TAYLOR_RADIUS = 1e-8


def primary_factor(q: int, w):
    """E_q(w) = (1 - w) exp(w + w^2/2 + ... + w^q/q)."""
    if q < 0:
        raise ValueError("genus must be nonnegative")
    w = np.asarray(w, dtype=complex)
    out = (1.0 - w) * np.exp(_partial_log_series(q, w))
    return out[()] if out.ndim == 0 else out


def _partial_log_series(q: int, w):
    acc = np.zeros(np.shape(w), dtype=complex)
    power = np.ones(np.shape(w), dtype=complex)
    for j in range(1, q + 1):
        power = power * w
        acc = acc + power / j
    return acc


def log_primary_factor(q: int, w):
    """Complex ln E_q(w); the real part is exact ln|E_q(w)|.

    For |w| <= 1e-8 the leading terms of -Σ_{j>q} w^j/j are used, which
    avoids the cancellation between ln(1 - w) and the polynomial part.
    """
    w = np.asarray(w, dtype=complex)
    out = np.empty(w.shape, dtype=complex)
    small = np.abs(w) <= TAYLOR_RADIUS
    ws = w[small]
    out[small] = -(ws ** (q + 1)) / (q + 1) - ws ** (q + 2) / (q + 2)
    wl = w[~small]
    with np.errstate(divide="ignore"):
        out[~small] = np.log(1.0 - wl) + _partial_log_series(q, wl)
    return out


def genus_for_order(p: float) -> int:
    """ceil(p) - 1, with ceil(p) = p for integer p."""
    if not p > 0:
        raise ValueError("p must be positive")
    return math.ceil(p) - 1


@dataclass(frozen=True)
class ZeroTail:
    """An infinite zero family truncated at ``cutoff``.

    ``kind`` is one of the :func:`growthlab.points.lattice_zeros` families;
    it fixes the analytic bound on the omitted factors.
    """

    kind: str
    cutoff: float

    @property
    def convergence_exponent(self) -> float:
        return {"integers": 1.0, "squares": 0.5, "gaussian": 2.0}[self.kind]

    def power_sum_bound(self, s: float) -> float:
        """Upper bound for Σ_{|a| > cutoff} m |a|^(-s)."""
        if s <= self.convergence_exponent:
            return math.inf
        R = self.cutoff
        if self.kind == "integers":
            n = max(math.floor(R), 1)
            return 2.0 * n ** (1.0 - s) / (s - 1.0)
        if self.kind == "squares":
            n = max(math.floor(math.sqrt(R)), 1)
            return n ** (1.0 - 2.0 * s) / (2.0 * s - 1.0)
        # Gaussian integers: each lattice point owns a unit square inside |w| <= |a| + 1
        R0 = max(R - 1.0, 1.0)
        return 2.0 * math.pi * (R0 ** (2.0 - s) / (s - 2.0) + 2.0 * R0 ** (1.0 - s) / (s - 1.0)) * (
            (R0 + 1.0) / R0
        ) ** s


@dataclass(frozen=True)
class CanonicalProductSpec(FunctionSpec):
    """exp(log_leading) * Π E_q(z / a)^m over a distribution with no origin point."""

    zero_set: PointDistribution
    genus: int
    log_leading: float = 0.0
    tail: ZeroTail | None = None

    def __post_init__(self):
        if self.zero_set.origin_multiplicity:
            raise OriginPoint("canonical products need Z(0) = 0")
        if self.genus < 0:
            raise ValueError("genus must be nonnegative")

    @property
    def positive_coefficients(self):
        pts = self.zero_set.points
        return self.genus == 0 and bool(np.all((pts.imag == 0) & (pts.real < 0)))

    def tail_bound(self, z) -> np.ndarray:
        """Bound on |ln f_full(z) - ln f_truncated(z)| from the omitted zeros."""
        az = np.abs(np.asarray(z))
        if self.tail is None:
            return np.zeros(az.shape)
        q1 = self.genus + 1
        return az**q1 / q1 * self.tail.power_sum_bound(q1)

    def log_phase(self, z):
        log_abs, arg = _sum_log_factors(self.genus, z, self.zero_set)
        log_abs = log_abs + self.log_leading
        phase = np.where(np.isneginf(log_abs), 0.0, np.exp(1j * arg))
        n = max(self.zero_set.total, 1)
        err = _EPS * (4.0 + math.sqrt(n)) * (1.0 + np.abs(log_abs)) + self.tail_bound(z)
        err = np.where(np.isfinite(err), err, np.inf)
        return log_abs, phase, err

    def zeros(self, radius):
        return self.zero_set.restrict(radius)

    def describe(self):
        return f"canonical:q={self.genus}[{self.zero_set.total} zeros]"


def _sum_log_factors(q: int, z, Z: PointDistribution):
    z = np.asarray(z, dtype=complex)
    zf = z.reshape(-1)
    la = np.zeros(zf.shape)
    ar = np.zeros(zf.shape)
    pts, mult = Z.points, Z.multiplicities
    if len(pts):
        step = max(1, _CHUNK // max(1, zf.size))
        for i in range(0, len(pts), step):
            w = zf[:, None] / pts[None, i : i + step]
            lf = log_primary_factor(q, w)
            m = mult[i : i + step]
            la += lf.real @ m
            ar += lf.imag @ m
        # complex a / a need not round to exactly 1, so hits are found structurally
        la[np.isin(zf, pts)] = -np.inf
    return la.reshape(z.shape), ar.reshape(z.shape)


def log_abs_product(spec: CanonicalProductSpec, z):
    """ln|f_Z(z)|: log_leading + Σ m ln|E_q(z/a)|, -inf exactly at stored zeros."""
    z = np.asarray(z, dtype=complex)
    out = spec.log_phase(np.atleast_1d(z))[0]
    return out[0] if z.ndim == 0 else out


def build_f_Z(
    Z: PointDistribution, p: float, declared_exponent: float | None = None
) -> CanonicalProductSpec:
    """Canonical product of genus ceil(p) - 1 vanishing exactly on Z.

    ``declared_exponent`` is the convergence exponent of the infinite family
    that ``Z`` truncates, if any; a genus too small for it is rejected.
    """
    if Z.origin_multiplicity:
        raise OriginPoint("Z(0) must be 0")
    q = genus_for_order(p)
    if declared_exponent is not None and q + 1 <= declared_exponent:
        raise GenusTooSmall(
            f"Σ |a|^-(q+1) diverges for genus {q} and convergence exponent {declared_exponent}"
        )
    spec = CanonicalProductSpec(Z, q)
    _check_zero_faithfulness(spec, Z)
    return spec


def build_from_family(kind: str, cutoff: float, p: float) -> CanonicalProductSpec:
    """Truncate a standard zero family at ``cutoff`` and build its product.

    The omitted factors are accounted for in ``est_rel_err`` through
    :meth:`CanonicalProductSpec.tail_bound`.
    """
    tail = ZeroTail(kind, cutoff)
    Z = lattice_zeros(kind, cutoff)
    spec = build_f_Z(Z, p, declared_exponent=tail.convergence_exponent)
    return CanonicalProductSpec(spec.zero_set, spec.genus, 0.0, tail)


def _check_zero_faithfulness(spec: CanonicalProductSpec, Z: PointDistribution) -> None:
    if len(Z) == 0:
        return
    R = float(Z.moduli[-1])
    if spec.zeros(R) != Z:
        raise AssertionError("canonical product lost zeros during construction")
