import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from growthlab import funcat, radial
from growthlab.errors import GenusTooSmall, OriginPoint
from growthlab.points import PointDistribution, integral_count, lattice_zeros
from growthlab.products import (
    CanonicalProductSpec,
    build_f_Z,
    build_from_family,
    genus_for_order,
    log_abs_product,
    log_primary_factor,
    primary_factor,
)

# 0.5 * exp(0.5)
E1_HALF = 0.824360635350064

unit_disk = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)


def test_primary_factor_examples():
    assert primary_factor(0, 0.3) == pytest.approx(0.7)
    assert primary_factor(1, 0.5) == pytest.approx(E1_HALF, rel=1e-15)
    for q in range(5):
        assert primary_factor(q, 0.0) == 1.0
        assert primary_factor(q, 1.0) == 0.0


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 4), unit_disk)
def test_primary_factor_classical_estimate(q, w):
    # |1 - E_q(w)| <= |w|^(q+1) on the closed unit disk
    assert abs(1 - primary_factor(q, w)) <= abs(w) ** (q + 1) * (1 + 1e-12) + 1e-15


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.complex_numbers(min_magnitude=1e-14, max_magnitude=1e-8, allow_nan=False, allow_infinity=False))
def test_log_primary_factor_small_argument(q, w):
    with mpmath.workdps(60):
        ref = mpmath.log(1 - mpmath.mpc(w)) + sum(mpmath.mpc(w) ** j / j for j in range(1, q + 1))
    got = log_primary_factor(q, np.array([w]))[0]
    assert abs(got.real - float(ref.real)) <= 1e-14 * abs(w) ** (q + 1) + 1e-300


def test_genus_for_order():
    assert genus_for_order(1.0) == 0
    assert genus_for_order(1.5) == 1
    assert genus_for_order(3.0) == 2
    with pytest.raises(ValueError):
        genus_for_order(0.0)


def test_single_zero_product():
    f = build_f_Z(PointDistribution.from_points([1.0]), 1.0)
    assert f.genus == 0
    assert log_abs_product(f, 3.0) == pytest.approx(math.log(2.0))
    assert log_abs_product(f, 0.0) == 0.0


def test_empty_product_is_one():
    f = build_f_Z(PointDistribution.empty(), 2.0)
    assert log_abs_product(f, np.array([5.0, -3j])).tolist() == [0.0, 0.0]


def test_builder_errors():
    with pytest.raises(OriginPoint):
        build_f_Z(PointDistribution.from_points([0.0, 1.0]), 1.0)
    with pytest.raises(GenusTooSmall):
        build_f_Z(lattice_zeros("integers", 10.0), 1.0, declared_exponent=1.0)
    with pytest.raises(GenusTooSmall):
        build_from_family("gaussian", 5.0, 2.0)


def test_integer_product_against_sinc():
    f = build_from_family("integers", 1e4, 2.0)
    v = log_abs_product(f, 0.5)
    assert v == pytest.approx(math.log(2.0 / math.pi), abs=1e-4)
    # the reported tail bound covers the observed truncation error
    assert abs(v - math.log(2.0 / math.pi)) <= f.tail_bound(0.5) * 1.0001


def test_pair_symmetric_genus_one_equals_genus_zero_of_squares():
    a = np.array([1.3, 2 + 1j, -0.7j, 4.5])
    Z = PointDistribution.from_points(np.concatenate((a, -a)))
    f = CanonicalProductSpec(Z, 1)
    z = np.array([0.4 + 0.2j, 3.3, -2 + 2j, 7j])
    direct = np.sum(np.log(np.abs(1 - z[:, None] ** 2 / a[None, :] ** 2)), axis=1)
    assert np.allclose(log_abs_product(f, z), direct, atol=1e-10)


@pytest.mark.parametrize("p", [1.0, 1.5, 3.0])
def test_zero_faithfulness_and_positivity(p):
    rng = np.random.default_rng(int(p * 10))
    Z = PointDistribution.from_points(rng.normal(size=30) + 1j * rng.normal(size=30))
    f = build_f_Z(Z, p)
    assert np.all(np.isneginf(log_abs_product(f, Z.points)))
    probes = 4 * (rng.uniform(-1, 1, 1000) + 1j * rng.uniform(-1, 1, 1000))
    assert np.all(np.isfinite(log_abs_product(f, probes)))
    assert f.zeros(10.0) == Z


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_jensen_and_growth_lower_bound(p):
    rng = np.random.default_rng(3)
    Z = PointDistribution.from_points(3 * (rng.uniform(-1, 1, 50) + 1j * rng.uniform(-1, 1, 50)))
    f = build_f_Z(Z, p)
    for r in (0.3, 1.0, 2.5, 4.5):
        assert abs(radial.jensen_residual(f, r)) <= 1e-6
        assert radial.max_modulus(f, r) >= float(integral_count(Z, r)) + f.log_leading - 1e-6


def test_squares_product_order():
    sq = build_f_Z(lattice_zeros("squares", 200.0**2), 1.0)
    from growthlab.profile import log_grid

    est = radial.estimate_order_type(radial.max_modulus_profile(sq, log_grid(1.0, 1e4)))
    assert abs(est.order - 0.5) <= 0.1


def test_positive_coefficient_shortcut_matches_scan():
    # zeros on the negative axis with genus 0: M(r) = f(r)
    f = build_f_Z(PointDistribution.from_points([-1.0, -2.5, -7.0]), 1.0)
    assert f.positive_coefficients
    assert radial.max_modulus(f, 3.0) == pytest.approx(math.log((1 + 3) * (1 + 3 / 2.5) * (1 + 3 / 7)), rel=1e-14)
