import math

import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy import integrate

from specgeom import ball_spectrum as bs
from specgeom import bounds
from specgeom.bessel import nth_zero
from specgeom.bounds import ConstraintFunctional, ConstraintKind, Configuration
from specgeom.errors import DomainError, ResourceError

J0 = 2.404825557695773
J1 = 3.8317059702075123


def test_sphere_area():
    assert_allclose(bounds.sphere_area(2), 2 * math.pi, rtol=1e-14)
    assert_allclose(bounds.sphere_area(3), 4 * math.pi, rtol=1e-14)
    assert_allclose(bounds.sphere_area(10), 10 * math.pi**5 / math.factorial(5), rtol=1e-13)


def test_constraint_exponents():
    assert ConstraintFunctional("HausdorffBoundary", 5).beta == 4
    assert ConstraintFunctional(ConstraintKind.LEBESGUE_MEASURE, 5).beta == 5
    assert ConstraintFunctional("TorsionalRigidity", 5).beta == 7
    with pytest.raises(DomainError):
        ConstraintFunctional("TorsionalRigidity", 3, budget=0)


def test_isoperimetric_equality_for_disk():
    c = ConstraintFunctional("HausdorffBoundary", 2, budget=2 * math.pi)
    assert_allclose(bounds.isoperimetric_lower_bound(1, c), J0**2, rtol=1e-10)


def test_isoperimetric_second_eigenvalue():
    c = ConstraintFunctional("HausdorffBoundary", 2, budget=1.0)
    assert_allclose(bounds.isoperimetric_lower_bound(2, c), 2 * J0**2 * (2 * math.pi) ** 2, rtol=1e-10)
    vol = ConstraintFunctional("LebesgueMeasure", 3, budget=4 * math.pi / 3)
    assert_allclose(bounds.isoperimetric_lower_bound(2, vol), 2 ** (2 / 3) * math.pi**2, rtol=1e-10)
    with pytest.raises(DomainError):
        bounds.isoperimetric_lower_bound(3, c)


def test_hausdorff_bound_small_dimensions():
    rep = bounds.hausdorff_component_bound(3, 3)
    assert rep.omega_max == 1
    assert_allclose(rep.ratio, (4.493409457909064 / math.pi) ** 2, rtol=1e-10)
    assert_allclose(rep.bound_value, 2 ** (-2 / 3) * (rep.ratio - 1), rtol=1e-9)
    assert bounds.hausdorff_component_bound(6, 7).omega_max == 2


def test_hausdorff_bound_nondecreasing_in_k():
    for m in (3, 4, 6):
        om = [bounds.hausdorff_component_bound(m, k).omega_max for k in range(3, 3 * m)]
        assert om == sorted(om)


@pytest.mark.parametrize("m,omega", [(5, 1), (6, 2), (24, 2), (25, 3), (587, 3), (588, 4)])
def test_boundary_measure_breakpoints(m, omega):
    rep = bounds.hausdorff_component_bound(m, 3)
    assert rep.omega_max == omega
    assert rep.err_flag == ""


def test_boundary_measure_table_small():
    rows = bounds.theorem2v_table(30)
    assert [r.dimension for r in rows] == list(range(3, 31))
    assert [r.omega_max for r in rows] == [1] * 3 + [2] * 19 + [3] * 6
    with pytest.raises(ResourceError):
        bounds.theorem2v_table(5000)


def test_asymptotic_certificate():
    assert bounds.closed_form_asymptotic_omega() == 4
    rep = bounds.asymptotic_omega_bound()
    assert rep.applicable and rep.omega_max == 4
    assert_allclose(rep.extras["exp_bound"], math.exp(35 / 16), rtol=1e-14)


def test_computed_and_bracket_paths_agree_near_2_15():
    computed = bounds.hausdorff_component_bound(2**15 - 2, 3, tol=1e-8)
    assert computed.omega_max <= 4
    assert bounds.asymptotic_omega_bound(2**15).omega_max == 4


def test_t_constraint_examples():
    rep = bounds.t_constraint_component_bound(2, 3, 2)
    assert rep.applicable and rep.omega_max == 1
    assert_allclose(rep.ratio, (J1 / J0) ** 2, rtol=1e-10)
    rep = bounds.t_constraint_component_bound(4, 4, 4)
    assert_allclose(rep.ratio, 3.227, atol=1e-3)
    assert rep.applicable and rep.omega_max == 2
    rep = bounds.t_constraint_component_bound(2, 3, 4)
    assert not rep.applicable and rep.omega_max is None


@pytest.mark.parametrize(
    "mode,m,k,omega",
    [
        ("LebesgueMeasure", 19, 5, 3),
        ("LebesgueMeasure", 20, 6, 4),
        ("TorsionalRigidity", 26, 6, 4),
        ("TorsionalRigidity", 27, 7, 5),
    ],
)
def test_volume_and_torsion_breakpoints(mode, m, k, omega):
    row = bounds.corollary5_tables(mode, m)[-1]
    assert (row.dimension, row.k, row.omega_max) == (m, k, omega)


def test_torsion_table_inapplicable_in_low_dimension():
    rows = bounds.corollary5_tables("TorsionalRigidity", 6)
    assert [r.applicable for r in rows] == [False, False, False, True, True]
    with pytest.raises(DomainError):
        bounds.corollary5_tables("HausdorffBoundary", 6)


def test_lambda2_star_planar():
    est = bounds.lambda2_star_bounds(2)
    assert_allclose(est.lower, 2 * J0**2 * (2 * math.pi) ** 2, rtol=1e-10)
    assert_allclose(est.upper, 4 * J0**2 * (2 * math.pi) ** 2, rtol=1e-10)


@given(st.integers(4, 10**6))
def test_lambda2_star_expansion(m):
    assert abs(2 ** (2 / m) - (1 + math.log(4) / m)) <= 4 / m**2


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 200))
def test_lambda2_star_ordering(m):
    est = bounds.lambda2_star_bounds(m)
    assert est.lower <= est.upper
    assert_allclose(est.gap, 2 ** (2 / (m * (m - 1))), rtol=1e-12)


def test_ball_not_minimiser():
    assert bounds.ball_not_minimiser_check(3)
    assert_allclose(bounds.ball_not_minimiser_margin(3), 4.493409457909064 - math.sqrt(2) * math.pi, atol=1e-9)
    assert bounds.ball_not_minimiser_check(2**15)
    with pytest.raises(DomainError):
        bounds.ball_not_minimiser_check(2)
    # the planar inequality really does not fail: j_1 < 2 j_0
    assert J1 < 2 * J0


def test_configuration_examples():
    assert bounds.enumerate_configurations(4, 4, 4, refined=True) == [Configuration(0, 1), Configuration(1, 1)]
    assert Configuration(2, 1) in bounds.enumerate_configurations(8, 5, 8, refined=True)
    assert bounds.enumerate_configurations(2, 2, 2) == [Configuration(0, 1), Configuration(2, 0)]


@pytest.mark.parametrize("m,k,beta,refined", [(4, 4, 4, True), (8, 5, 8, True), (3, 6, 3, False), (5, 9, 7, False)])
def test_configurations_agree_with_brute_force(m, k, beta, refined):
    got = bounds.enumerate_configurations(m, k, beta, refined=refined)
    bound = (bs.ball_eigenvalues(m, k).values[k - 1] / bs.lambda_1(m)) ** (beta / 2)
    brute = []
    for k1 in range(2 * k + 1):
        for k2 in range(2 * k + 1):
            if k1 + k2 < 1 or k1 + k2 > k or k1 + 2 * k2 > bound:
                continue
            if k2 == 0 and k1 != k:
                continue
            if refined and k < k1 + 3 * k2:
                continue
            brute.append(Configuration(k1, k2))
    assert sorted(got, key=lambda c: (c.omega, c.k1)) == got
    assert set(got) == set(brute)


def test_hausdorff_kind_allows_one_ball_at_most():
    confs = bounds.enumerate_configurations(8, 5, 7, refined=True, kind="HausdorffBoundary")
    assert all(c.k1 <= 1 for c in confs)


def test_torsion_constant_and_bound():
    assert_allclose(bounds.torsion_constant(2), math.sqrt(2 * math.pi) / 2, rtol=0, atol=1e-10)
    assert_allclose(bounds.torsion_eigenvalue_lower_bound(2, 1, math.pi / 8), 2.0001, atol=1e-4)
    b1 = bounds.torsion_eigenvalue_lower_bound(2, 1, 1.0)
    assert_allclose(bounds.torsion_eigenvalue_lower_bound(2, 9, 1.0), 3 * b1, rtol=1e-14)


def test_ball_torsion_by_radial_quadrature():
    for m in (2, 3, 5):
        radial = integrate.quad(lambda r: (1 - r * r) / (2 * m) * r ** (m - 1), 0, 1)[0]
        assert_allclose(bounds.ball_torsion(m), bounds.sphere_area(m) * radial, rtol=1e-12)
    assert_allclose(bounds.ball_torsion(3), 4 * math.pi / 45, rtol=1e-12)


def test_torsion_bound_below_true_spectrum():
    vals = bs.ball_eigenvalues(2, 50).values
    for k in range(1, 51):
        assert bounds.torsion_eigenvalue_lower_bound(2, k, math.pi / 8) <= vals[k - 1]
    assert bounds.torsion_eigenvalue_lower_bound(3, 1, bounds.ball_torsion(3)) <= math.pi**2
