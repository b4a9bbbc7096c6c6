"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Run directly (``python tests/test_acceptance.py``) for the bare report, or
under pytest, where the lines are repeated in the terminal summary.
"""
from __future__ import annotations

import math
import sys
import time

import numpy as np
import pytest

from growthlab import funcat, kernel, products, radial
from growthlab.funcat import Polynomial, Quotient
from growthlab.points import PointDistribution, integral_count, lattice_zeros
from growthlab.profile import log_grid
from growthlab.special import mittag_leffler
from growthlab.verify import re_plus_one_profile

RESULTS: dict[int, str] = {}


def _record(n: int, ok: bool, detail: str) -> bool:
    RESULTS[n] = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(RESULTS[n])
    return ok


def criterion_1() -> bool:
    t0 = time.perf_counter()
    worst = 0.0
    for rho in (0.1, 0.25, 0.5, 0.75, 1.0, 2.0, 5.0):
        p = kernel.optimal_p(rho)
        q = kernel.kernel_transform(kernel.power_profile(rho), p, 1.0)
        worst = max(worst, abs(q - kernel.paley_constant(rho)) / kernel.paley_constant(rho))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and kernel.paley_constant(1.0) == math.pi and elapsed < 5.0
    return _record(1, ok, f"Paley constants: max rel err {worst:.2e} (tol 1e-8), {elapsed:.2f} s (< 5 s)")


def criterion_2() -> bool:
    one = kernel.constant_profile(1.0)
    worst = max(
        abs(kernel.kernel_transform(one, p, r) - p) / p for p in (1.0, 1.5, 2.0, 3.5) for r in (0.5, 1.0, 7.0)
    )
    return _record(2, worst <= 1e-10, f"kernel mass: max rel err {worst:.2e} (tol 1e-10)")


def criterion_3() -> bool:
    t0 = time.perf_counter()
    f = funcat.polynomial_from_roots([1, 2j])
    g = funcat.Sinc(math.pi)
    res = [radial.jensen_residual(f, r) for r in (0.5, 1.5, 3.0)]
    res += [radial.jensen_residual(g, r) for r in (1.5, 3.5, 7.5)]
    worst = max(abs(x) for x in res)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and elapsed < 10.0
    return _record(3, ok, f"Jensen residual: max {worst:.2e} (tol 1e-6), {elapsed:.2f} s (< 10 s)")


def criterion_4() -> bool:
    radii = np.geomspace(0.1, 10.0, 20)
    worst, who = 0.0, ""
    for name, spec in funcat.catalog().items():
        v = radial.chain_check(spec, radii).max_violation
        if v >= worst:
            worst, who = v, name
    return _record(4, worst <= 1e-8, f"chain: worst violation {worst:.2e} ({who}) (tol 1e-8)")


def criterion_5() -> bool:
    num, den = Polynomial((1, -1)), Polynomial((1, 2))
    F = Quotient(num, den)
    worst = 0.0
    for r in (0.5, 1.5, 4.0):
        T = radial.nevanlinna_T(F, r)
        uF = radial.circle_mean(
            lambda z: np.maximum(funcat.log_abs(num, z), funcat.log_abs(den, z)), r
        )
        worst = max(worst, abs(T - uF))
    return _record(5, worst <= 1e-6, f"T(F) vs circle mean of max(ln|z-1|, ln|z+2|): max diff {worst:.6e} (tol 1e-6)")


def criterion_6() -> bool:
    rng = np.random.default_rng(11)
    built = [
        products.build_from_family("integers", 200.0, 2.0),
        products.build_from_family("squares", 1e4, 1.0),
        products.build_from_family("gaussian", 12.0, 3.0),
    ]
    Z = PointDistribution.from_points(rng.normal(size=30) + 1j * rng.normal(size=30) + 0.2)
    built += [products.build_f_Z(Z, p) for p in (1.0, 1.5, 3.0)]
    radii = np.geomspace(0.1, 20.0, 15)
    gap = -math.inf
    for g in built:
        Zg = g.zero_set
        for r in radii:
            # f(0) = 1 for canonical products
            gap = max(gap, float(integral_count(Zg, r)) - radial.max_modulus(g, r) - 1e-6)
    lower_ok = gap <= 0

    pairs = [
        (kernel.constant_profile(0.0), kernel.constant_profile(1.0)),
        (kernel.power_profile(0.5), kernel.power_profile(0.5, 1.0, 0.25)),
        (kernel.power_profile(0.5), kernel.ExactProfile(lambda t: t**0.5 + 0.2 * t**0.9, 0.9, (), 0.0)),
        (
            kernel.ExactProfile(lambda t: np.log(np.maximum(t, 1.0)), 0.0, (1.0,), 0.0),
            kernel.ExactProfile(lambda t: np.log1p(t), 0.0, (), 0.0),
        ),
        (
            kernel.counting_profile(Z),
            kernel.ExactProfile(lambda t: np.asarray(integral_count(Z, t)) + 0.1 * t, 1.0, tuple(Z.moduli), 0.0),
        ),
    ]
    p = 2.0
    mono = min(
        kernel.kernel_transform(hi, p, r) - kernel.kernel_transform(lo, p, r)
        for lo, hi in pairs
        for r in (0.3, 1.0, 5.0)
    )
    ok = lower_ok and mono >= 0
    return _record(
        6, ok, f"lnM >= N_Z + ln|f(0)| - 1e-6: worst excess {gap + 1e-6:.2e}; monotonicity min gap {mono:.2e}"
    )


def criterion_7() -> bool:
    a = kernel.ExactProfile(lambda t: np.log(np.maximum(2.0 * t, 1.0)), 0.0, (0.5,), 0.0)
    m1 = radial.lemma22_check(a, math.log(2.0), 1.0)
    m2 = radial.lemma22_check(re_plus_one_profile(), 2.0, 2.0)
    ok = m1 >= -1e-8 and m2 >= -1e-8
    return _record(7, ok, f"lemma margins {m1:.6f} (p=1), {m2:.6f} (p=2) (>= -1e-8)")


def criterion_8() -> bool:
    f = products.build_from_family("integers", 1e4, 2.0)
    rng = np.random.default_rng(20240601)
    z = 0.95 * np.sqrt(rng.uniform(0, 1, 20)) * np.exp(2j * np.pi * rng.uniform(0, 1, 20))
    la, pa, _ = funcat.log_phase(f, z)
    lb, pb, _ = funcat.log_phase(funcat.Sinc(math.pi), z)
    va, vb = np.exp(la) * pa, np.exp(lb) * pb
    err = float(np.max(np.abs(va - vb) / np.abs(vb)))
    sq = products.build_f_Z(lattice_zeros("squares", 200.0**2), 1.0)
    est = radial.estimate_order_type(radial.max_modulus_profile(sq, log_grid(1.0, 1e4)))
    ok = err <= 1e-4 and abs(est.order - 0.5) <= 0.1
    return _record(8, ok, f"product vs sinc rel err {err:.2e} (tol 1e-4); k^2 order {est.order:.3f} (0.5 +- 0.1)")


def criterion_9() -> bool:
    rng = np.random.default_rng(7)
    z = 20.0 * np.sqrt(rng.uniform(0, 1, 200)) * np.exp(2j * np.pi * rng.uniform(0, 1, 200))
    z = np.concatenate((z, [20.0, -20.0, 20j, 0.0]))
    e1 = max(abs(mittag_leffler(1.0, 1.0, w) - np.exp(w)) / max(1.0, abs(np.exp(w))) for w in z)
    ch = abs(mittag_leffler(0.5, 1.0, 1.0) - math.cosh(1.0))
    est = radial.estimate_order_type(radial.max_modulus_profile(funcat.MittagLeffler(0.75), log_grid(1.0, 30.0)))
    ok = e1 <= 1e-8 and ch <= 1e-9 and abs(est.order - 0.75) <= 0.08
    return _record(
        9, ok, f"E_1 vs exp {e1:.2e} (1e-8); E_0.5(1) vs cosh 1 {ch:.2e} (1e-9); E_0.75 order {est.order:.3f}"
    )


def criterion_10() -> bool:
    p = 2.0
    fG = funcat.Product((funcat.EXP, funcat.ExpPoly((-1.0, 0.0))))
    radii = [0.5, 2.0, 8.0, 30.0]
    lnM = np.array([radial.max_modulus(fG, r) for r in radii])
    C = radial.RadialProfile(np.array(radii), np.zeros(len(radii)), 0.0, extrapolation="constant")
    bound = kernel.theorem1_bound(C, p, radii).values
    target = p * math.log(abs(complex(funcat.evaluate(funcat.EXP, 0.0).value)))
    worst = float(max(np.max(np.abs(lnM - target)), np.max(np.abs(bound - target))))
    return _record(10, worst <= 1e-12, f"exp * e^-z: |lnM - 0|, |bound - 0| max {worst:.2e}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("crit", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 11)])
def test_acceptance(crit):
    assert crit()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
