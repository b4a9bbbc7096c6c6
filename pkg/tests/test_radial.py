import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from growthlab import funcat, radial
from growthlab.errors import ProfileCoverage, SingularityUnresolved
from growthlab.funcat import EXP, Polynomial, Quotient, Sine, polynomial_from_roots
from growthlab.profile import RadialProfile, log_grid

# quadrature oracle (mpmath, split at the kink cos θ = 1/4)
T_INV_Z_MINUS_1_AT_HALF = 0.15971714623438024

roots = st.lists(
    st.complex_numbers(min_magnitude=0.2, max_magnitude=5.0, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=6,
)


def test_max_modulus_closed_forms():
    for r in (0.3, 2.0, 9.0):
        assert radial.max_modulus(EXP, r) == pytest.approx(r, rel=1e-12)
        # |sin z| <= sinh|z| with equality on the imaginary axis
        assert radial.max_modulus(Sine(1.0), r) == pytest.approx(math.log(math.sinh(r)), rel=1e-10)
    assert radial.max_modulus(Polynomial((1, 0, -1)), 2.0) == pytest.approx(math.log(5.0), rel=1e-12)


def test_circle_mean_log_exp_and_polynomial():
    assert abs(radial.circle_mean_log(EXP, 5.0)) <= 1e-12
    f = polynomial_from_roots([1, 2j])
    for r in (0.5, 1.0, 1.5, 2.0, 3.0):
        exact = math.log(max(r, 1.0)) + math.log(max(r, 2.0))
        assert radial.circle_mean_log(f, r) == pytest.approx(exact, abs=1e-9)
    assert radial.circle_mean_log(f, 0.0) == pytest.approx(math.log(2.0))


@settings(max_examples=40, deadline=None)
@given(roots, st.floats(0.1, 6.0))
def test_jensen_for_random_polynomials(rts, r):
    f = polynomial_from_roots(rts, 1.5)
    assert abs(radial.jensen_residual(f, r)) <= 1e-6


@settings(max_examples=30, deadline=None)
@given(roots, st.floats(0.1, 6.0))
def test_circle_mean_below_max_modulus(rts, r):
    f = polynomial_from_roots(rts)
    assert radial.circle_mean_log(f, r) <= radial.max_modulus(f, r) + 1e-9


def test_jensen_needs_nonzero_origin():
    with pytest.raises(ValueError):
        radial.jensen_residual(Sine(math.pi), 1.0)


def test_jensen_sinc_and_rgamma():
    for r in (1.5, 3.5, 7.5):
        assert abs(radial.jensen_residual(funcat.Sinc(math.pi), r)) <= 1e-6
    assert abs(radial.jensen_residual(funcat.ReciprocalGamma(1.0), 10.0)) <= 1e-6


def test_characteristic_of_exp():
    for r in (0.5, math.pi, 8.0):
        assert radial.nevanlinna_T(EXP, r) == pytest.approx(r / math.pi, rel=1e-6)


def test_characteristic_simple_pole():
    F = Quotient(Polynomial((1,)), Polynomial((1, -1)))
    # node doubling converges only like h^2 across the ln⁺ kinks
    assert radial.nevanlinna_T(F, 0.5) == pytest.approx(T_INV_Z_MINUS_1_AT_HALF, abs=1e-7)
    # the kink-split fallback is far more accurate
    panels = radial._proximity_panels(F, 0.5, np.zeros(0), 1e-9)
    assert panels == pytest.approx(T_INV_Z_MINUS_1_AT_HALF, abs=1e-10)
    # outside the pole the counting term ln r appears
    m = radial.proximity(F, 2.0)
    assert radial.nevanlinna_T(F, 2.0) == pytest.approx(m + math.log(2.0), abs=1e-12)
    assert list(radial.poles_of(F, 3.0)) == [(1 + 0j, 1)]


def test_proximity_refuses_pole_on_circle():
    F = Quotient(Polynomial((1,)), Polynomial((1, -1)))
    with pytest.raises(SingularityUnresolved):
        radial.proximity(F, 1.0)


def test_first_main_theorem_identity():
    # T(r, F) - T(r, 1/F) = ln|F(0)| (Jensen for the quotient)
    num, den = Polynomial((1, -1)), Polynomial((1, 2))
    F, G = Quotient(num, den), Quotient(den, num)
    for r in (0.5, 1.5, 4.0):
        d = radial.nevanlinna_T(F, r) - radial.nevanlinna_T(G, r)
        assert d == pytest.approx(math.log(0.5), abs=1e-7)


def test_disk_mean_closed_form():
    # C(t) = ln⁺ t for f = z - 1, so B(r) = ln r - 1/2 + 1/(2 r^2) for r > 1
    g = log_grid(0.01, 100.0, 16)
    prof = RadialProfile(g, np.log(np.maximum(g, 1.0)), 0.0, extrapolation="log").with_log_tail()
    for r in (2.0, 10.0, 300.0):
        assert radial.disk_mean(prof, r) == pytest.approx(math.log(r) - 0.5 + 0.5 / r**2, rel=1e-12)
    assert radial.disk_mean(prof, 0.5) == 0.0
    with pytest.raises(ProfileCoverage):
        radial.disk_mean(RadialProfile(g, np.zeros_like(g)), 1e3)


def test_chain_holds_on_catalog_sample():
    radii = np.geomspace(0.1, 10.0, 8)
    for name in ("exp", "(z-1)(z-2i)", "sinc_pi"):
        rep = radial.chain_check(funcat.catalog()[name], radii)
        assert rep.max_violation <= 1e-8, name
        assert set(rep.slacks) == {"u0<=B", "B<=C", "C<=lnM", "C+<=T", "T<=lnM+"}


def test_chain_needs_nonzero_origin():
    with pytest.raises(ValueError):
        radial.chain_check(Sine(1.0), [1.0])


def test_lemma_margins():
    from growthlab import kernel
    from growthlab.verify import re_plus_one_profile

    a = kernel.ExactProfile(lambda t: np.log(np.maximum(2.0 * t, 1.0)), 0.0, (0.5,), 0.0)
    assert radial.lemma22_check(a, math.log(2.0), 1.0) == pytest.approx(math.log(1.5), abs=1e-10)
    # exact margin is sqrt 2 - 1; the interpolated profile sits above its convex target
    m = radial.lemma22_check(re_plus_one_profile(), 2.0, 2.0)
    assert math.sqrt(2.0) - 1.0 - 1e-8 <= m <= math.sqrt(2.0) - 1.0 + 1e-3


def test_order_type_of_exp_z2():
    est = radial.estimate_order_type(radial.max_modulus_profile(funcat.ExpPoly((1, 0, 0)), log_grid(1.0, 20.0)))
    assert est.order == pytest.approx(2.0, abs=1e-6)
    assert est.type == pytest.approx(1.0, rel=1e-6)


def test_circle_mean_of_fast_growth_far_out():
    # ln|exp(z^2)| = r^2 cos 2θ reaches -r^2 < ln 1e-300 on the circle
    assert abs(radial.circle_mean_log(funcat.ExpPoly((1, 0, 0)), 30.0)) <= 1e-9
