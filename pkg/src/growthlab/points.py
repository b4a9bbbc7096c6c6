"""Finite point distributions with multiplicities and their counting functions."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import NegativeInfinity

log = logging.getLogger(__name__)

ORIGIN_RADIUS = 1e-12


@dataclass(frozen=True)
class PointDistribution:
    """Multiset of complex points, sorted by modulus, origin kept separately.

    Use :meth:`from_points` to build one; it merges duplicates and folds
    near-origin points into ``origin_multiplicity``.
    """

    points: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    multiplicities: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    origin_multiplicity: int = 0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).reshape(-1)
        mult = np.asarray(self.multiplicities, dtype=int).reshape(-1)
        if pts.shape != mult.shape:
            raise ValueError("points and multiplicities must have equal length")
        if np.any(mult < 1):
            raise ValueError("multiplicities must be positive integers")
        if self.origin_multiplicity < 0:
            raise ValueError("origin multiplicity must be nonnegative")
        order = np.lexsort((np.angle(pts), np.abs(pts)))
        pts, mult = pts[order].copy(), mult[order].copy()
        pts.setflags(write=False)
        mult.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "multiplicities", mult)
        object.__setattr__(self, "_moduli", np.abs(pts))
        object.__setattr__(self, "_cum_mult", np.cumsum(mult))
        with np.errstate(divide="ignore"):
            object.__setattr__(self, "_cum_logs", np.cumsum(mult * np.log(np.abs(pts))))

    @classmethod
    def from_points(
        cls,
        points: Iterable[complex],
        multiplicities: Iterable[int] | None = None,
        origin_multiplicity: int = 0,
        merge_radius: float = 0.0,
    ) -> "PointDistribution":
        pts = np.asarray(list(points), dtype=complex).reshape(-1)
        mult = (
            np.ones(pts.shape, dtype=int)
            if multiplicities is None
            else np.asarray(list(multiplicities), dtype=int).reshape(-1)
        )
        if pts.shape != mult.shape:
            raise ValueError("points and multiplicities must have equal length")
        if np.any(mult < 1):
            raise ValueError("multiplicities must be positive integers")
        near_origin = np.abs(pts) < ORIGIN_RADIUS
        if np.any(near_origin):
            if np.any(pts[near_origin] != 0):
                log.warning(
                    "%d point(s) with modulus below %g folded into the origin",
                    int(np.count_nonzero(pts[near_origin] != 0)),
                    ORIGIN_RADIUS,
                )
            origin_multiplicity += int(mult[near_origin].sum())
            pts, mult = pts[~near_origin], mult[~near_origin]
        pts, mult = _merge(pts, mult, merge_radius)
        return cls(pts, mult, int(origin_multiplicity))

    @classmethod
    def empty(cls) -> "PointDistribution":
        return cls()

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        if self.origin_multiplicity:
            yield 0j, self.origin_multiplicity
        yield from zip(self.points.tolist(), self.multiplicities.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointDistribution):
            return NotImplemented
        return (
            self.origin_multiplicity == other.origin_multiplicity
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.multiplicities, other.multiplicities)
        )

    __hash__ = None

    @property
    def total(self) -> int:
        return int(self.multiplicities.sum()) + self.origin_multiplicity

    @property
    def moduli(self) -> np.ndarray:
        return self._moduli

    def restrict(self, radius: float) -> "PointDistribution":
        """Points in the closed disk of the given radius."""
        n = int(np.searchsorted(self._moduli, radius, side="right"))
        return PointDistribution(self.points[:n], self.multiplicities[:n], self.origin_multiplicity)

    def to_dict(self) -> dict:
        return {
            "points": [{"re": p.real, "im": p.imag, "mult": int(m)} for p, m in self],
        }


def _merge(pts: np.ndarray, mult: np.ndarray, merge_radius: float):
    if len(pts) == 0:
        return pts, mult
    if merge_radius <= 0:
        uniq, inverse = np.unique(pts, return_inverse=True)
        summed = np.zeros(len(uniq), dtype=int)
        np.add.at(summed, inverse, mult)
        return uniq, summed
    # greedy clustering in input order; the first point of a cluster is kept
    kept: list[complex] = []
    counts: list[int] = []
    for p, m in zip(pts.tolist(), mult.tolist()):
        for i, q in enumerate(kept):
            if abs(p - q) <= merge_radius:
                counts[i] += m
                break
        else:
            kept.append(p)
            counts.append(m)
    return np.asarray(kept, dtype=complex), np.asarray(counts, dtype=int)


def radial_count(Z: PointDistribution, r):
    """Number of points (with multiplicity) in the closed disk of radius r."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be nonnegative")
    idx = np.searchsorted(Z.moduli, r, side="right")
    cum = np.concatenate(([0], Z._cum_mult))
    out = cum[idx] + Z.origin_multiplicity
    return out[()] if out.ndim == 0 else out


def integral_count(Z: PointDistribution, r, require_nonnegative: bool = False):
    """N_Z(r) = Σ_{0<|a|<=r} m ln(r/|a|) + m0 ln r, in closed form.

    With an origin point the value is negative for r < 1; pass
    ``require_nonnegative=True`` to turn that into :class:`NegativeInfinity`.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("integral_count needs r > 0")
    if require_nonnegative and Z.origin_multiplicity and np.any(r < 1):
        raise NegativeInfinity("N_Z(r) < 0 for r < 1 when the origin is a point of Z")
    idx = np.searchsorted(Z.moduli, r, side="right")
    cum_m = np.concatenate(([0], Z._cum_mult))[idx]
    cum_l = np.concatenate(([0.0], Z._cum_logs))[idx]
    out = cum_m * np.log(r) - cum_l + Z.origin_multiplicity * np.log(r)
    return out[()] if out.ndim == 0 else out


def _as_dict(Z: PointDistribution) -> dict[complex, int]:
    d = {complex(p): int(m) for p, m in zip(Z.points.tolist(), Z.multiplicities.tolist())}
    if Z.origin_multiplicity:
        d[0j] = Z.origin_multiplicity
    return d


def pole_distribution(zeros_f: PointDistribution, zeros_g: PointDistribution) -> PointDistribution:
    """Pointwise positive part (Zero_g - Zero_f)^+."""
    f, g = _as_dict(zeros_f), _as_dict(zeros_g)
    pts, mult = [], []
    for p, m in g.items():
        k = m - f.get(p, 0)
        if k > 0:
            pts.append(p)
            mult.append(k)
    return PointDistribution.from_points(pts, mult)


def union(*dists: PointDistribution) -> PointDistribution:
    """Sum of distributions (multiplicities add)."""
    pts = np.concatenate([d.points for d in dists]) if dists else np.zeros(0, complex)
    mult = np.concatenate([d.multiplicities for d in dists]) if dists else np.zeros(0, int)
    return PointDistribution.from_points(pts, mult, sum(d.origin_multiplicity for d in dists))


def scale(Z: PointDistribution, c: complex) -> PointDistribution:
    if c == 0:
        raise ValueError("scale factor must be nonzero")
    return PointDistribution.from_points(Z.points * c, Z.multiplicities, Z.origin_multiplicity)


# --- file formats ---------------------------------------------------------

CSV_HEADER = ("re", "im", "multiplicity")


def read_csv(text: str, merge_radius: float = 0.0) -> PointDistribution:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or tuple(f.strip() for f in reader.fieldnames) != CSV_HEADER:
        raise ValueError(f"zero-list CSV header must be {','.join(CSV_HEADER)}")
    pts, mult = [], []
    for row in reader:
        row = {k.strip(): v for k, v in row.items()}
        pts.append(complex(float(row["re"]), float(row["im"])))
        mult.append(int(row["multiplicity"]))
    return PointDistribution.from_points(pts, mult, merge_radius=merge_radius)


def write_csv(Z: PointDistribution) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p, m in Z:
        w.writerow((repr(float(p.real)), repr(float(p.imag)), m))
    return buf.getvalue()


def read_json(text: str, merge_radius: float = 0.0) -> PointDistribution:
    data = json.loads(text)
    if isinstance(data, dict):
        data = data["points"]
    pts = [complex(float(e["re"]), float(e["im"])) for e in data]
    mult = [int(e.get("mult", 1)) for e in data]
    return PointDistribution.from_points(pts, mult, merge_radius=merge_radius)


def write_json(Z: PointDistribution) -> str:
    return json.dumps([{"re": p.real, "im": p.imag, "mult": m} for p, m in Z], indent=1)


def load(path, merge_radius: float = 0.0) -> PointDistribution:
    """Read a zero list from a ``.csv`` or ``.json`` file."""
    path = str(path)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.lower().endswith(".json"):
        return read_json(text, merge_radius)
    return read_csv(text, merge_radius)


def lattice_zeros(kind: str, radius: float) -> PointDistribution:
    """Materialize a few standard infinite zero families up to a radius.

    ``integers`` (nonzero k), ``squares`` (k^2, k >= 1), ``gaussian``
    (nonzero Gaussian integers).
    """
    if kind == "integers":
        k = np.arange(1, math.floor(radius) + 1)
        return PointDistribution.from_points(np.concatenate((k, -k)).astype(complex))
    if kind == "squares":
        k = np.arange(1, math.floor(math.sqrt(radius)) + 1)
        return PointDistribution.from_points((k * k).astype(complex))
    if kind == "gaussian":
        n = math.floor(radius)
        a, b = np.meshgrid(np.arange(-n, n + 1), np.arange(-n, n + 1))
        z = (a + 1j * b).ravel()
        z = z[(np.abs(z) <= radius) & (z != 0)]
        return PointDistribution.from_points(z)
    raise ValueError(f"unknown zero family {kind!r}")
