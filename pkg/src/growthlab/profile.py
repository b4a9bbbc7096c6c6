"""Sampled radial profiles r -> phi(r) and order/type estimation."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import ProfileCoverage

EXTRAPOLATIONS = ("power", "constant", "log", "forbidden")
POINTS_PER_DECADE = 16


def log_grid(r_min: float, r_max: float, per_decade: int = POINTS_PER_DECADE) -> np.ndarray:
    """Log-spaced radii including both endpoints."""
    if not 0 < r_min < r_max:
        raise ValueError("need 0 < r_min < r_max")
    n = max(2, int(math.ceil(per_decade * math.log10(r_max / r_min))) + 1)
    return np.geomspace(r_min, r_max, n)


@dataclass(frozen=True)
class RadialProfile:
    """Samples of phi on a log grid, linear in ln r between samples.

    Below ``grid[0]`` the profile is linear in r towards ``left_value``
    (the value at 0); above ``grid[-1]`` it follows ``extrapolation``:

    * ``power``: ``tail_coefficient * r**tail_exponent``
    * ``log``: ``values[-1] + tail_coefficient * ln(r / grid[-1])``
    * ``constant``: ``values[-1]``
    * ``forbidden``: raises :class:`ProfileCoverage`
    """

    grid: np.ndarray
    values: np.ndarray
    left_value: float | None = None
    extrapolation: str = "forbidden"
    tail_exponent: float = 0.0
    tail_coefficient: float = 0.0
    increasing: bool = False

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float).reshape(-1)
        v = np.asarray(self.values, dtype=float).reshape(-1)
        if g.shape != v.shape or len(g) == 0:
            raise ValueError("grid and values must be nonempty and of equal length")
        if np.any(g <= 0) or np.any(np.diff(g) <= 0):
            raise ValueError("grid must be strictly increasing and positive")
        if not np.all(np.isfinite(v)):
            raise ValueError("profile values must be finite")
        if self.extrapolation not in EXTRAPOLATIONS:
            raise ValueError(f"extrapolation must be one of {EXTRAPOLATIONS}")
        if self.increasing and np.any(np.diff(v) < 0):
            raise ValueError("profile flagged increasing has a decreasing step")
        g.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    @property
    def breakpoints(self) -> np.ndarray:
        return self.grid

    @property
    def value_at_zero(self) -> float:
        return float(self.values[0] if self.left_value is None else self.left_value)

    @property
    def growth_order(self) -> float | None:
        """Power growth of the declared tail, ``None`` if undeclared."""
        if self.extrapolation == "power":
            return self.tail_exponent
        if self.extrapolation in ("constant", "log"):
            return 0.0
        return None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        g, v = self.grid, self.values
        out = np.empty(t.shape)
        below = t < g[0]
        above = t > g[-1]
        inside = ~below & ~above
        lg = np.log(g)
        if np.any(inside):
            out[inside] = np.interp(np.log(t[inside]), lg, v)
        if np.any(below):
            v0 = self.value_at_zero
            tb = np.maximum(t[below], 0.0)
            out[below] = v0 + (v[0] - v0) * tb / g[0]
        if np.any(above):
            out[above] = self._tail(t[above])
        return out[()] if out.ndim == 0 else out

    def _tail(self, t):
        kind = self.extrapolation
        if kind == "power":
            return self.tail_coefficient * t**self.tail_exponent
        if kind == "log":
            return self.values[-1] + self.tail_coefficient * np.log(t / self.grid[-1])
        if kind == "constant":
            return np.full(t.shape, self.values[-1])
        raise ProfileCoverage(
            f"profile evaluated at r={float(np.max(t)):g} beyond grid end {self.grid[-1]:g}"
        )

    def with_power_tail(self, exponent: float) -> "RadialProfile":
        """Continuous power tail c * r**exponent glued at the last sample."""
        c = self.values[-1] / self.grid[-1] ** exponent
        return replace(self, extrapolation="power", tail_exponent=exponent, tail_coefficient=c)

    def with_log_tail(self) -> "RadialProfile":
        """Continue with the slope (in ln r) of the last grid segment."""
        if len(self.grid) < 2:
            slope = 0.0
        else:
            slope = (self.values[-1] - self.values[-2]) / math.log(self.grid[-1] / self.grid[-2])
        return replace(self, extrapolation="log", tail_coefficient=float(slope))

    def with_fitted_tail(self, rho: float | None = None) -> "RadialProfile":
        """Power tail with the exponent fitted on the top decade."""
        est = estimate_order_type(self, rho)
        return self.with_power_tail(est.order if rho is None else rho)

    @classmethod
    def sample(
        cls,
        func: Callable[[float], float],
        grid: Sequence[float],
        left_value: float | None = None,
        **kwargs,
    ) -> "RadialProfile":
        g = np.asarray(grid, dtype=float)
        return cls(g, np.array([func(float(r)) for r in g]), left_value, **kwargs)


class OrderType(NamedTuple):
    order: float
    type: float
    type_at_rho: float | None


MIN_TOP_DECADE = 8


def estimate_order_type(M_profile: RadialProfile, rho: float | None = None) -> OrderType:
    """Order and type of a ln M profile from its top decade of radii.

    The order is the least-squares slope of ln(values) against ln r, the
    type is max(values / r**order) on the same samples.  With ``rho`` given,
    ``type_at_rho`` holds max(values / r**rho).
    """
    g, v = M_profile.grid, M_profile.values
    top = g >= g[-1] / 10.0 * (1 - 1e-12)
    if np.count_nonzero(top) < MIN_TOP_DECADE:
        raise ProfileCoverage(
            f"need at least {MIN_TOP_DECADE} samples in the top decade, got {np.count_nonzero(top)}"
        )
    gt, vt = g[top], v[top]
    pos = vt > 0
    if np.count_nonzero(pos) < 2:
        return OrderType(0.0, 0.0, None if rho is None else 0.0)
    x = np.log(gt[pos])
    y = np.log(vt[pos])
    slope = float(np.polyfit(x, y, 1)[0])
    sigma = float(np.max(vt / gt**slope))
    at_rho = None if rho is None else float(np.max(vt / gt**rho))
    return OrderType(slope, sigma, at_rho)
