import numpy as np
import pytest

from siegel.boundary import (NEAR_BOUNDARY_FRACTION, BoundaryCurve, dynamics_consistency,
                             f_phase_curve, gamma_curve, polyline_crossings, self_intersection_test,
                             siegel_map, winding_number)
from siegel.series import build_nonlinear


@pytest.fixture(scope="module")
def near(nonlinear_4096, bracket_4096):
    return gamma_curve(nonlinear_4096, NEAR_BOUNDARY_FRACTION * bracket_4096.mid, 8192,
                       r_ref=bracket_4096.hi)


def test_small_radius_is_a_circle(nonlinear_4096):
    c = gamma_curve(nonlinear_4096, 1e-4, 256, r_ref=0.49)
    np.testing.assert_allclose(c.Z_vals, c.x, rtol=1e-3)
    np.testing.assert_allclose(c.W_vals, c.lam, atol=1e-3)
    assert winding_number(c.Z_vals) == 1
    assert self_intersection_test(c) == []


def test_conjugate_symmetry(nonlinear_4096):
    c = gamma_curve(nonlinear_4096, 0.3, 512, r_ref=0.49)
    # real coefficients: Z(conj x) = conj Z(x)
    np.testing.assert_allclose(c.Z_vals[1:][::-1], np.conj(c.Z_vals[1:]), atol=1e-14)
    assert abs(c.Z_vals[0].imag) < 1e-15


def test_W_is_ratio_of_Z(nonlinear_4096):
    c = gamma_curve(nonlinear_4096, 0.3, 512, r_ref=0.49)
    Zf = c.lam * c.x * np.exp(c.m_fwd)
    np.testing.assert_allclose(c.W_vals, Zf / c.Z_vals, rtol=1e-13)


def test_near_boundary_curve_is_simple(near):
    assert near.samples == 8192
    assert winding_number(near.Z_vals) == 1
    assert self_intersection_test(near, "Z") == []
    assert self_intersection_test(near, "Gamma") == []


def test_semiconjugacy_on_near_boundary_curve(nonlinear_4096, near):
    assert dynamics_consistency(nonlinear_4096, near) < 1e-12


def test_semiconjugacy_improves_with_order(gold):
    errs = []
    for N in (64, 128, 512):
        t = build_nonlinear(gold, N)
        errs.append(dynamics_consistency(t, gamma_curve(t, 0.45, 512, r_ref=0.49, tol=1.0)))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-13


def test_siegel_map_fixes_w_axis():
    W = np.array([0.3 + 0.1j, -2.0, 1j])
    Z1, W1 = siegel_map(np.zeros(3), W)
    np.testing.assert_array_equal(Z1, 0)
    np.testing.assert_array_equal(W1, W)


def test_winding_number():
    t = 2 * np.pi * np.arange(100) / 100
    assert winding_number(np.exp(1j * t)) == 1
    assert winding_number(np.exp(-2j * t)) == -2
    assert winding_number(np.exp(1j * t) + 3) == 0


def test_figure_eight_has_one_crossing():
    t = 2 * np.pi * np.arange(400) / 400
    eight = np.sin(t) + 1j * np.sin(t) * np.cos(t)
    assert len(self_intersection_test(eight)) == 1
    # crossings are invariant under dropping every other vertex of a smooth curve
    assert len(polyline_crossings(np.column_stack([np.sin(t[::2]), np.sin(2 * t[::2])]))) == 1


def test_gamma_requires_curve():
    with pytest.raises(ValueError):
        self_intersection_test(np.ones(10, dtype=complex), "Gamma")


def test_gamma_curve_guards(nonlinear_4096, linearized_8192):
    with pytest.raises(ValueError):
        gamma_curve(linearized_8192, 0.3)
    with pytest.raises(ValueError):
        gamma_curve(nonlinear_4096, 0.4899, r_ref=0.49)
    with pytest.raises(ValueError):
        gamma_curve(nonlinear_4096, 0.3, samples=4)
    c = gamma_curve(nonlinear_4096, 0.3, 16, r_ref=0.49)
    assert isinstance(c, BoundaryCurve)
    with pytest.raises(ValueError):
        self_intersection_test(c)


def test_phase_of_exp_has_no_winding(nonlinear_4096, bracket_4096):
    # F = exp(m) has no zeros, so its phase cannot wind
    ph = f_phase_curve(nonlinear_4096, 0.95 * bracket_4096.mid, 4096, r_ref=bracket_4096.hi)
    assert ph.winding == 0
    assert len(ph.phase) == 4096
    assert abs(ph.phase[0]) < 1e-15
