"""Command-line front end.

    growthlab characteristics DESCRIPTOR [--grid a:b:n]
    growthlab paley-table RHO [RHO ...]
    growthlab bound (--function D | --zeros PATH | --t-of D | --profile PATH) [--p P]
    growthlab product (--zeros PATH | --family KIND --cutoff R) [--p P]
    growthlab jensen DESCRIPTOR
    growthlab verify SUITE

Settings come from flags, then a JSON ``--config`` file, then defaults.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from typing import Callable, Sequence

import numpy as np

from . import __version__, descriptors, funcat, kernel, points, products, radial, verify
from .errors import GrowthLabError, ParseError
from .profile import POINTS_PER_DECADE, RadialProfile, estimate_order_type, log_grid
from .report import GrowthReport, build_timestamp, simple_csv, write_table

THREADS_ENV = "GROWTHLAB_THREADS"


@dataclass(frozen=True)
class RunConfig:
    r_min: float = 0.1
    r_max: float = 10.0
    per_decade: int = 16
    rel_tol: float = 1e-9
    proximity_tol: float = 1e-7
    kernel_tol: float = 1e-10
    p: str = "optimal"
    extend_decades: float = 1.0
    profile_density: int = 64
    format: str = "csv"
    threads: int = 0

    def validate(self) -> "RunConfig":
        if not (self.r_min > 0 and self.r_max >= self.r_min):
            raise ParseError("grid needs 0 < r_min <= r_max")
        if self.per_decade < 1 or self.profile_density < 1:
            raise ParseError("points per decade must be positive")
        if not (self.rel_tol > 0 and self.proximity_tol > 0 and self.kernel_tol > 0):
            raise ParseError("tolerances must be positive")
        if self.format not in ("csv", "json"):
            raise ParseError("format must be csv or json")
        if self.extend_decades < 0:
            raise ParseError("extend_decades must be nonnegative")
        parse_p_policy(self.p)
        return self

    @property
    def radii(self) -> np.ndarray:
        if self.r_max == self.r_min:
            return np.array([self.r_min])
        return log_grid(self.r_min, self.r_max, self.per_decade)

    @property
    def settings(self) -> radial.CircleQuadratureSettings:
        return radial.CircleQuadratureSettings(rel_tol=self.rel_tol, proximity_rel_tol=self.proximity_tol)

    def snapshot(self) -> dict:
        # the worker count never changes results, so it stays out of reports
        d = asdict(self)
        d.pop("threads")
        return d


def parse_grid(text: str) -> dict:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ParseError("--grid takes r_min:r_max[:points_per_decade]")
    try:
        out = {"r_min": float(parts[0]), "r_max": float(parts[1])}
        if len(parts) == 3:
            out["per_decade"] = int(parts[2])
    except ValueError as exc:
        raise ParseError(f"bad --grid {text!r}") from exc
    return out


def parse_p_policy(text: str) -> tuple[str, float | None]:
    """('fixed', p), ('optimal', rho) or ('optimal', None) for a fitted rho."""
    t = str(text).strip()
    if t == "optimal":
        return "optimal", None
    if t.startswith("optimal:"):
        rho = float(t.split(":", 1)[1])
        if not rho > 0:
            raise ParseError("optimal:RHO needs RHO > 0")
        return "optimal", rho
    try:
        p = float(t)
    except ValueError as exc:
        raise ParseError(f"--p takes a number or optimal[:RHO], got {text!r}") from exc
    if not p >= 1:
        raise ParseError("p must be >= 1")
    return "fixed", p


def resolve_p(policy: str, fitted_rho: Callable[[], float]) -> tuple[float, float | None]:
    kind, val = parse_p_policy(policy)
    if kind == "fixed":
        return val, None
    rho = fitted_rho() if val is None else val
    return kernel.optimal_p(max(rho, 1e-12)), rho


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    known = {f.name for f in fields(RunConfig)}
    if "grid" in data:
        data.update(parse_grid(str(data.pop("grid"))))
    unknown = set(data) - known
    if unknown:
        raise ParseError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def effective_config(args) -> RunConfig:
    cfg = RunConfig()
    env = os.environ.get(THREADS_ENV)
    if env:
        cfg = replace(cfg, threads=int(env))
    cfg = replace(cfg, **load_config(getattr(args, "config", None)))
    flags = {}
    if getattr(args, "grid", None):
        flags.update(parse_grid(args.grid))
    for name in ("p", "format", "threads"):
        if getattr(args, name, None) is not None:
            flags[name] = getattr(args, name)
    if getattr(args, "tol", None) is not None:
        flags["rel_tol"] = args.tol
    return replace(cfg, **flags).validate()


def worker_count(cfg: RunConfig) -> int:
    return cfg.threads if cfg.threads > 0 else (os.cpu_count() or 1)


def per_radius(func: Callable[[float], float], radii: Sequence[float], cfg: RunConfig) -> np.ndarray:
    """Evaluate func at each radius; order follows the grid whatever the pool size."""
    radii = [float(r) for r in radii]
    n = worker_count(cfg)
    if n <= 1 or len(radii) <= 1:
        return np.array([func(r) for r in radii], dtype=float)
    with ThreadPoolExecutor(max_workers=n) as pool:
        return np.array(list(pool.map(func, radii)), dtype=float)


def _metadata(command: str, cfg: RunConfig, **extra) -> dict:
    meta = {"command": command, "tool": "growthlab", "version": __version__, "config": cfg.snapshot()}
    meta.update(extra)
    meta["timestamp"] = build_timestamp()
    return meta


def _f0(spec) -> float:
    return float(funcat.log_abs(spec, np.array([0j]))[0])


def _zeros_or_none(spec, radius):
    try:
        if isinstance(spec, funcat.Quotient):
            return spec.zeros(radius)
        return funcat.known_zeros(spec, radius)
    except GrowthLabError:
        return None


def _nz_column(Z, radii):
    if Z is None:
        return None
    return [float(points.integral_count(Z, r)) for r in radii]


def _profile_density(cfg: RunConfig) -> int:
    # internal profiles feed interpolation and tail fits, so never go coarse
    return max(cfg.per_decade, cfg.profile_density, POINTS_PER_DECADE)


def _c_profile(spec, radii, cfg, top=None) -> RadialProfile:
    """C(r; f) on a log grid two decades below the smallest radius up to ``top``."""
    hi = max(radii) if top is None else top
    grid = radial.characteristic_grid(list(radii) + [hi], _profile_density(cfg))
    vals = per_radius(lambda r: radial.circle_mean_log(spec, r, cfg.settings), grid, cfg)
    return RadialProfile(grid, vals, _f0(spec))


# --- commands ---------------------------------------------------------------


def cmd_characteristics(descriptor: str, cfg: RunConfig) -> GrowthReport:
    spec = descriptors.parse(descriptor)
    radii = cfg.radii
    s = cfg.settings
    f0 = _f0(spec)
    entire = spec.is_entire
    lnM = per_radius(lambda r: radial.max_modulus(spec, r, s), radii, cfg) if entire else None
    T = per_radius(lambda r: radial.nevanlinna_T(spec, r, s), radii, cfg) if math.isfinite(f0) else None
    B = None
    if math.isfinite(f0):
        Cprof = _c_profile(spec, radii, cfg)
        C = Cprof(radii)
        B = [radial.disk_mean(Cprof, r) for r in radii]
    else:
        C = per_radius(lambda r: radial.circle_mean_log(spec, r, s), radii, cfg)
    Z = _zeros_or_none(spec, float(radii[-1]))
    rep = GrowthReport(
        spec.describe(),
        radii,
        {"lnM": lnM, "C": list(C), "B": B, "T": None if T is None else list(T), "NZ": _nz_column(Z, radii)},
        _metadata("characteristics", cfg, input=descriptor),
    )
    if entire and math.isfinite(f0):
        viol = _chain_violation(f0, np.asarray(B), np.asarray(C), lnM, T)
        rep.set("chain_violation", list(viol))
        rep.metadata["chain_ok"] = bool(np.all(viol <= 1e-8))
    return rep


def _chain_violation(u0, B, C, M, T):
    slacks = np.vstack([B - u0, C - B, M - C, T - np.maximum(C, 0.0), np.maximum(M, 0.0) - T])
    return np.maximum(-slacks.min(axis=0), 0.0)


def cmd_paley_table(rhos: Sequence[float], cfg: RunConfig) -> str:
    rows = []
    for rho in rhos:
        p = kernel.optimal_p(rho)
        P = kernel.paley_constant(rho)
        q = kernel.kernel_transform(kernel.power_profile(rho), p, 1.0, kernel.KernelParams(p, cfg.kernel_tol))
        rows.append((float(rho), P, p, q, abs(q - P) / P))
    header = ("rho", "P", "p", "P_quadrature", "rel_err")
    if cfg.format == "json":
        return json.dumps(
            {"schema_version": 1, "rows": [dict(zip(header, r)) for r in rows]}, indent=2
        ) + "\n"
    return simple_csv(header, rows)


def _read_profile(path: str) -> RadialProfile:
    text = open(path, encoding="utf-8").read()
    rep = GrowthReport.from_csv(text)
    names = [k for k, v in rep.columns.items() if v is not None]
    col = "T" if "T" in names else ("value" if "value" in names else None)
    if col is None:
        raise ParseError(f"{path}: profile CSV needs a 'T' or 'value' column")
    return RadialProfile(rep.radii, np.asarray(rep.columns[col], dtype=float))


def _fitted_rho(profile: RadialProfile) -> float:
    return max(estimate_order_type(profile).order, 0.0)


def cmd_bound(cfg: RunConfig, function=None, zeros=None, t_of=None, profile=None) -> GrowthReport:
    given = [x is not None for x in (function, zeros, t_of, profile)]
    if sum(given) != 1:
        raise ParseError("bound needs exactly one of --function, --zeros, --t-of, --profile")
    radii = cfg.radii
    s = cfg.settings
    top = float(radii[-1]) * 10.0**cfg.extend_decades
    cols: dict = {}
    extra = {}
    if zeros is not None:
        Z = points.load(zeros)
        p, rho = resolve_p(cfg.p, lambda: 0.0)
        bound = kernel.theorem2_bound(Z, p, radii).values
        NZ = np.array(_nz_column(Z, radii))
        cols.update(NZ=list(NZ), bound_ln=list(bound), lower_ln=list(NZ), margin=list(bound - NZ))
        label = f"zeros:{zeros}"
    else:
        if profile is not None:
            prof = _read_profile(profile)
            label = f"profile:{profile}"
        else:
            spec = descriptors.parse(function if function is not None else t_of)
            label = spec.describe()
            if function is not None:
                if not spec.is_entire:
                    raise ParseError("--function needs an entire function; use --t-of for quotients")
                if not math.isfinite(_f0(spec)):
                    raise ParseError("the circle-mean bound needs f(0) != 0")
                prof = _c_profile(spec, radii, cfg, top)
            else:
                grid = radial.characteristic_grid(list(radii) + [top], _profile_density(cfg))
                T = per_radius(lambda r: radial.nevanlinna_T(spec, r, s), grid, cfg)
                prof = RadialProfile(grid, T, max(_f0(spec), 0.0))
        p, rho = resolve_p(cfg.p, lambda: _fitted_rho(prof))
        params = kernel.KernelParams(p, cfg.kernel_tol)
        tail = prof.with_fitted_tail(None)
        if tail.tail_exponent >= p:
            raise kernel.Divergent(
                f"profile grows like r^{tail.tail_exponent:.3g}; choose p above it (got p = {p:g})"
            )
        bound = np.array([kernel.kernel_transform(tail, p, float(r), params) for r in radii])
        cols["bound_ln"] = list(bound)
        extra["tail_exponent"] = tail.tail_exponent
        if function is not None:
            f0 = _f0(spec)
            C = prof(radii)
            lower = C + (p - 1.0) * f0
            cols.update(
                lnM=list(per_radius(lambda r: radial.max_modulus(spec, r, s), radii, cfg)),
                C=list(C),
                lower_ln=list(lower),
                margin=list(bound - lower),
            )
        else:
            cols["T"] = list(prof(radii))
    meta = _metadata("bound", cfg, input=label, p=p, rho=rho, **extra)
    if "margin" in cols:
        meta["margin_ok"] = bool(np.min(cols["margin"]) >= -1e-6)
    return GrowthReport(label, radii, cols, meta)


def cmd_product(cfg: RunConfig, zeros=None, family=None, cutoff=None) -> GrowthReport:
    if (zeros is None) == (family is None):
        raise ParseError("product needs exactly one of --zeros or --family")
    kind, val = parse_p_policy(cfg.p)
    if kind == "fixed":
        p = val
    elif val is not None:
        p = kernel.optimal_p(val)
    elif family is not None:
        p = kernel.optimal_p(products.ZeroTail(family, 1.0).convergence_exponent)
    else:
        p = 1.0
    if zeros is not None:
        spec = products.build_f_Z(points.load(zeros), p)
        label = f"zeros:{zeros}"
    else:
        if cutoff is None:
            raise ParseError("--family needs --cutoff")
        spec = products.build_from_family(family, cutoff, p)
        label = f"family:{family},R={cutoff:g}"
    radii = cfg.radii
    s = cfg.settings
    Z = spec.zero_set
    NZ = np.array(_nz_column(Z, radii))
    lnM = per_radius(lambda r: radial.max_modulus(spec, r, s), radii, cfg)
    C = per_radius(lambda r: radial.circle_mean_log(spec, r, s), radii, cfg)
    cols = {
        "lnM": list(lnM),
        "C": list(C),
        "NZ": list(NZ),
        "jensen_residual": list(C - spec.log_leading - NZ),
        "lower_margin": list(lnM - NZ - spec.log_leading),
    }
    meta = _metadata("product", cfg, input=label, p=p, genus=spec.genus, zeros=Z.total)
    return GrowthReport(spec.describe(), radii, cols, meta)


def cmd_jensen(descriptor: str, cfg: RunConfig) -> GrowthReport:
    spec = descriptors.parse(descriptor)
    radii = cfg.radii
    s = cfg.settings
    Z = funcat.known_zeros(spec, float(radii[-1]))
    C = per_radius(lambda r: radial.circle_mean_log(spec, r, s), radii, cfg)
    res = per_radius(lambda r: radial.jensen_residual(spec, r, s), radii, cfg)
    cols = {"C": list(C), "NZ": _nz_column(Z, radii), "jensen_residual": list(res)}
    return GrowthReport(spec.describe(), radii, cols, _metadata("jensen", cfg, input=descriptor))


# --- argument parsing -------------------------------------------------------


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--grid", help="r_min:r_max[:points_per_decade]")
    parser.add_argument("--p", help="kernel exponent: a number >= 1, optimal, or optimal:RHO")
    parser.add_argument("--tol", type=float, help="relative tolerance of circle quadrature")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--out", help="output path (default stdout)")
    parser.add_argument("--threads", type=int, help=f"worker threads (env {THREADS_ENV})")
    parser.add_argument("--config", help="JSON file with RunConfig fields")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="growthlab", description="Growth characteristics of entire functions.")
    ap.add_argument("--version", action="version", version=f"growthlab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("characteristics", help="ln M, C, B, T and N_Z on a radial grid")
    p.add_argument("descriptor")
    _common(p)

    p = sub.add_parser("paley-table", help="Paley constants and optimal exponents")
    p.add_argument("rho", type=float, nargs="+")
    _common(p)

    p = sub.add_parser("bound", help="kernel bounds from C, N_Z or T")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--function", help="entire function descriptor (circle-mean bound)")
    src.add_argument("--zeros", help="zero list CSV/JSON (counting-function bound)")
    src.add_argument("--t-of", dest="t_of", help="meromorphic descriptor (characteristic bound)")
    src.add_argument("--profile", help="CSV with columns r and T (or value)")
    _common(p)

    p = sub.add_parser("product", help="canonical product over a zero set")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--zeros", help="zero list CSV/JSON")
    src.add_argument("--family", choices=("integers", "squares", "gaussian"))
    p.add_argument("--cutoff", type=float, help="truncation radius for --family")
    _common(p)

    p = sub.add_parser("jensen", help="Jensen residuals C - ln|f(0)| - N_Z")
    p.add_argument("descriptor")
    _common(p)

    p = sub.add_parser("verify", help="run a self-check suite")
    p.add_argument("suite", choices=(*verify.SUITES, "all"))
    p.add_argument("--out", help="write the JSON summary here (default stdout)")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _run_verify(args)
        cfg = effective_config(args)
        if args.command == "paley-table":
            text = cmd_paley_table(args.rho, cfg)
        else:
            if args.command == "characteristics":
                rep = cmd_characteristics(args.descriptor, cfg)
            elif args.command == "bound":
                rep = cmd_bound(cfg, args.function, args.zeros, args.t_of, args.profile)
            elif args.command == "product":
                rep = cmd_product(cfg, args.zeros, args.family, args.cutoff)
            else:
                rep = cmd_jensen(args.descriptor, cfg)
            text = rep.serialize(cfg.format)
        write_table(args.out, text)
    except (GrowthLabError, OSError, ValueError) as exc:
        print(f"growthlab: error: {exc}", file=sys.stderr)
        return 2
    return 0


def _run_verify(args) -> int:
    summary = verify.run(args.suite)
    for res in summary["results"]:
        for c in res["checks"]:
            print(verify.Check(**c).line(), file=sys.stderr)
    write_table(args.out, json.dumps(summary, indent=2) + "\n")
    if not summary["passed"]:
        print(f"FAILED: {summary['first_failure']}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
