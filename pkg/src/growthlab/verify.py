"""Self-checking suites run by ``growthlab verify``.

Each suite returns a list of :class:`Check`; a run passes iff every check
does.  The checks use independent closed forms wherever one exists.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import funcat, kernel, products, radial
from .funcat import Polynomial, Quotient
from .points import PointDistribution, integral_count, lattice_zeros
from .profile import RadialProfile, log_grid


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.name}: value={self.value:.3e} tol={self.tolerance:.1e} {self.detail}".rstrip()


def _check(name, value, tol, detail="") -> Check:
    value = float(value)
    return Check(name, bool(math.isfinite(value) and value <= tol), value, tol, detail)


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# --- suites -----------------------------------------------------------------


def suite_paley() -> list[Check]:
    out = []
    for rho in (0.1, 0.25, 0.5, 0.75, 1.0, 2.0, 5.0):
        p = kernel.optimal_p(rho)
        q = kernel.kernel_transform(kernel.power_profile(rho), p, 1.0)
        out.append(_check(f"paley rho={rho:g} p={p:g}", _rel(q, kernel.paley_constant(rho)), 1e-8))
    out.append(_check("P(1) = pi", abs(kernel.paley_constant(1.0) - math.pi), 0.0))
    left = kernel.paley_constant(0.5 - 1e-12)
    out.append(_check("P continuous at 1/2", abs(left - math.pi / 2), 1e-10))
    return out


def suite_kernel() -> list[Check]:
    out = []
    one = kernel.constant_profile(1.0)
    worst = max(
        _rel(kernel.kernel_transform(one, p, r), p) for p in (1, 1.5, 2, 3.5) for r in (0.0, 1.0, 10.0)
    )
    out.append(_check("kernel mass equals p", worst, 1e-10))
    # scale covariance on a kinked profile
    phi = kernel.ExactProfile(lambda t: np.log(np.maximum(t, 1.0)) + 0.3 * t**0.5, 0.5, (1.0,), 0.0)
    c = 3.7
    phic = kernel.ExactProfile(lambda t: phi(c * t), 0.5, (1.0 / c,), 0.0)
    worst = max(
        abs(kernel.kernel_transform(phi, p, r) - kernel.kernel_transform(phic, p, r / c))
        for p in (1.0, 2.5)
        for r in (0.5, 4.0)
    )
    out.append(_check("scale covariance", worst, 1e-9))
    for rho, p, r, sigma, cc in ((1.0, 2.0, 1.0, 1.0, 0.0), (0.25, 1.0, 16.0, 2.0, 0.0), (0.7, 3.0, 2.5, 1.3, 0.4)):
        closed = kernel.power_bound(kernel.PowerBudget(sigma, rho, cc), p, r)
        quad = kernel.kernel_transform(kernel.power_profile(rho, sigma, cc), p, r)
        out.append(_check(f"power_bound rho={rho:g} p={p:g}", _rel(quad, closed), 1e-9))
    Z = PointDistribution.from_points([1, 2j, -3, 0.5 + 0.5j], [1, 2, 1, 3])
    worst = max(
        _rel(
            kernel.kernel_transform(kernel.counting_profile(Z), p, r),
            float(kernel.counting_transform(Z, p, r)),
        )
        for p in (1.0, 1.5, 4.0)
        for r in (0.3, 1.0, 7.0)
    )
    out.append(_check("N_Z transform closed form vs quadrature", worst, 1e-9))
    out.append(suite_zero_free()[0])
    return out


def suite_zero_free() -> list[Check]:
    # f = exp: G = |f(0)|^p / f is zero-free and f G has modulus |f(0)|^p = 1
    f = funcat.EXP
    p = 2.0
    G = funcat.ExpPoly((-1.0, 0.0))  # |f(0)|^p / f = e^{-z}
    fG = funcat.Product((f, G))
    radii = [0.5, 2.0, 8.0]
    lnM = np.array([radial.max_modulus(fG, r) for r in radii])
    C = RadialProfile(np.array(radii), np.zeros(3), 0.0, extrapolation="constant")
    bound = kernel.theorem1_bound(C, p, radii).values
    return [_check("zero-free construction for exp", float(np.max(np.abs(lnM - bound))), 1e-12)]


def _structural_catalog():
    out = {}
    for name, spec in funcat.catalog().items():
        try:
            spec.zeros(1.0)
        except Exception:
            continue
        out[name] = spec
    return out


def suite_jensen() -> list[Check]:
    out = []
    f = funcat.polynomial_from_roots([1, 2j])
    worst = max(abs(radial.jensen_residual(f, r)) for r in (0.5, 1.5, 3.0))
    out.append(_check("jensen (z-1)(z-2i)", worst, 1e-6))
    g = funcat.Sinc(math.pi)
    worst = max(abs(radial.jensen_residual(g, r)) for r in (1.5, 3.5, 7.5))
    out.append(_check("jensen sin(pi z)/(pi z)", worst, 1e-6))
    out.append(_check("jensen empty zero set", abs(radial.jensen_residual(funcat.constant(3.0), 2.0)), 0.0))
    radii = np.geomspace(0.1, 20.0, 20)
    for name, spec in _structural_catalog().items():
        worst = max(abs(radial.jensen_residual(spec, r)) for r in radii)
        out.append(_check(f"jensen catalog {name}", worst, 1e-6))
    return out


def suite_chain() -> list[Check]:
    out = []
    radii = np.geomspace(0.1, 10.0, 20)
    for name, spec in funcat.catalog().items():
        rep = radial.chain_check(spec, radii)
        out.append(_check(f"chain {name}", rep.max_violation, 1e-8))
    return out


def u_F_mean(num, den, r) -> float:
    """Circle mean of max(ln|num|, ln|den|)."""
    return radial.circle_mean(
        lambda z: np.maximum(funcat.log_abs(num, z), funcat.log_abs(den, z)), r
    )


def suite_meromorphic() -> list[Check]:
    out = []
    num, den = Polynomial((1, -1)), Polynomial((1, 2))
    F = Quotient(num, den)
    g0 = math.log(2.0)
    worst = max(
        abs(radial.nevanlinna_T(F, r) - (u_F_mean(num, den, r) - g0)) for r in (0.5, 1.5, 4.0)
    )
    out.append(_check("T = C[max(ln|f0|,ln|g0|)] - ln|g0(0)|", worst, 1e-6))
    worst = 0.0
    inv = Quotient(den, num)
    for r in (0.5, 1.5, 4.0):
        diff = radial.proximity(F, r) - radial.proximity(inv, r) - radial.circle_mean_log(F, r)
        worst = max(worst, abs(diff))
    out.append(_check("proximity(F) - proximity(1/F) = C(F)", worst, 1e-6))
    out.append(_check("T(exp, pi) = 1", abs(radial.nevanlinna_T(funcat.EXP, math.pi) - 1.0), 1e-6))
    return out


def suite_products() -> list[Check]:
    out = []
    f = products.build_from_family("integers", 1e4, 2.0)
    rng = np.random.default_rng(20240601)
    z = 0.95 * np.sqrt(rng.uniform(0, 1, 20)) * np.exp(2j * np.pi * rng.uniform(0, 1, 20))
    la, ph, _ = funcat.log_phase(f, z)
    lb, pb, _ = funcat.log_phase(funcat.Sinc(math.pi), z)
    va, vb = np.exp(la) * ph, np.exp(lb) * pb
    out.append(_check("pm-integer product vs sinc", float(np.max(np.abs(va - vb) / np.abs(vb))), 1e-4))
    sq = products.build_f_Z(lattice_zeros("squares", 200.0**2), 1.0)
    est = radial.estimate_order_type(radial.max_modulus_profile(sq, log_grid(1.0, 1e4)))
    out.append(_check("k^2 product order", abs(est.order - 0.5), 0.1, f"fitted {est.order:.4f}"))
    # zero faithfulness and the Jensen lower bound
    Z = PointDistribution.from_points(rng.normal(size=40) + 1j * rng.normal(size=40) + 0.3)
    for p in (1.0, 1.5, 3.0):
        g = products.build_f_Z(Z, p)
        at_zeros = products.log_abs_product(g, Z.points)
        out.append(_check(f"zeros hit exactly p={p:g}", 0.0 if np.all(np.isneginf(at_zeros)) else 1.0, 0.0))
        radii = np.geomspace(0.1, 6.0, 12)
        gap = max(
            float(integral_count(Z, r)) - radial.max_modulus(g, r) for r in radii
        )
        out.append(_check(f"ln M >= N_Z p={p:g}", gap, 1e-6))
    return out


def suite_lemma22() -> list[Check]:
    out = []
    prof = kernel.ExactProfile(lambda t: np.log(np.maximum(2.0 * t, 1.0)), 0.0, (0.5,), 0.0)
    m = radial.lemma22_check(prof, math.log(2.0), 1.0)
    out.append(_check("lemma margin ln+(|z|/0.5), p=1", -m, 1e-8, f"margin {m:.6g}"))
    Cu = re_plus_one_profile()
    m = radial.lemma22_check(Cu, 2.0, 2.0)
    out.append(_check("lemma margin (Re z + 1)+, p=2", -m, 1e-8, f"margin {m:.6g}"))
    return out


def re_plus_one_profile() -> RadialProfile:
    """Circle means of (Re z + 1)^+, with the t/pi growth as a power tail."""
    g = log_grid(1e-3, 1e3, 32)
    vals = [radial.circle_mean(lambda z: np.maximum(z.real + 1.0, 0.0), r) for r in g]
    return RadialProfile(g, np.array(vals), 1.0).with_power_tail(1.0)


def suite_special() -> list[Check]:
    from .special import mittag_leffler

    out = []
    rng = np.random.default_rng(7)
    z = 20.0 * np.sqrt(rng.uniform(0, 1, 200)) * np.exp(2j * np.pi * rng.uniform(0, 1, 200))
    z = np.concatenate((z, [20.0, -20.0, 20j]))
    worst = max(abs(mittag_leffler(1.0, 1.0, w) - np.exp(w)) / max(1.0, abs(np.exp(w))) for w in z)
    out.append(_check("E_1 = exp on |z| <= 20", worst, 1e-8))
    out.append(_check("E_0.5(1) = cosh 1", abs(mittag_leffler(0.5, 1.0, 1.0) - math.cosh(1.0)), 1e-9))
    est = radial.estimate_order_type(
        radial.max_modulus_profile(funcat.MittagLeffler(0.75), log_grid(1.0, 30.0))
    )
    out.append(_check("E_0.75 order", abs(est.order - 0.75), 0.08, f"fitted {est.order:.4f}"))
    return out


SUITES: dict[str, Callable[[], list[Check]]] = {
    "paley": suite_paley,
    "kernel": suite_kernel,
    "jensen": suite_jensen,
    "chain": suite_chain,
    "meromorphic": suite_meromorphic,
    "products": suite_products,
    "lemma22": suite_lemma22,
    "special": suite_special,
}


def run(name: str) -> dict:
    """Run one suite (or ``all``) and return a JSON-ready summary."""
    names = list(SUITES) if name == "all" else [name]
    for n in names:
        if n not in SUITES:
            raise KeyError(f"unknown suite {n!r}; choose from {', '.join(SUITES)} or all")
    results = []
    first_failure = None
    for n in names:
        t0 = time.perf_counter()
        checks = SUITES[n]()
        elapsed = time.perf_counter() - t0
        passed = all(c.passed for c in checks)
        if not passed and first_failure is None:
            first_failure = next(f"{n}: {c.name}" for c in checks if not c.passed)
        results.append(
            {"suite": n, "passed": passed, "seconds": round(elapsed, 3), "checks": [asdict(c) for c in checks]}
        )
    return {
        "suite": name,
        "passed": first_failure is None,
        "first_failure": first_failure,
        "results": results,
    }
