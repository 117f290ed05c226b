import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from siegel.analysis import (COCYCLE_A0, FitResult, RankDeficientError, SupercriticalFitError,
                             cocycle_check, cocycle_matrix, fit_log_growth, mather_relation_check,
                             smoothness_estimate, zygmund_estimators)
from siegel.radius import Growth, GrowthVerdict
from siegel.series import ScaledSequence, build_linearized, scale
from siegel.weyl import histogram, weyl_sums


@pytest.fixture(scope="module")
def ws4096(gold):
    return weyl_sums(gold, 4096)


@pytest.fixture(scope="module")
def fit(nonlinear_4096, bracket_4096, ws4096):
    return fit_log_growth(scale(nonlinear_4096, bracket_4096.lo), ws4096)


def _fake_fit(a, d, verdict=None):
    z = np.zeros(4)
    return FitResult(a, 0.0, 0.0, d, z, z, z, z, z, np.zeros((4, 4)), verdict)


def test_synthetic_fit_recovers_coefficients(ws4096):
    k = np.arange(4097, dtype=float)
    with np.errstate(divide="ignore"):
        y = 2.0 * ws4096.S + 0.0 * k + 3.0 - 0.5 * np.log(k)
    y[0] = 0.0
    res = fit_log_growth(ScaledSequence(1.0, y), ws4096)
    np.testing.assert_allclose(res.coefficients, (2.0, 0.0, 3.0, -0.5), atol=1e-8)
    assert res.rms_residual < 1e-10
    assert res.k_range == (32, 4096)


def test_fit_rejects_bad_inputs(ws4096):
    with pytest.raises(ValueError):
        fit_log_growth(ScaledSequence(1.0, np.zeros(100)), ws4096, k_min=1)
    with pytest.raises(RankDeficientError):
        fit_log_growth(ScaledSequence(1.0, np.zeros(34)), ws4096, k_min=32)
    with pytest.raises(ValueError):
        fit_log_growth(ScaledSequence(1.0, np.zeros(5000)), ws4096)


def test_fit_reference_values(fit):
    # golden alpha, N = 4096, r at the lower end of the bracket
    assert fit.a == pytest.approx(-0.92, abs=0.03)
    assert fit.d == pytest.approx(-1.28, abs=0.1)
    # b absorbs ln(r / r_crit), so it is only near zero
    assert abs(fit.b) < 5e-3
    assert fit.rms_residual < 0.3


def test_fit_residual_peaks_at_convergents(fit, gold):
    pairs = fit.peaks_at_convergents(gold, count=8)
    assert {k for k, _ in pairs[:3]} == {987, 1597, 2584}
    assert all(q == k for k, q in pairs[:3])
    assert (610, 610) in pairs


def test_smoothness_examples():
    hist = SimpleNamespace(mode=1.0, bin_width=1e-3)
    est = smoothness_estimate(_fake_fit(-1.0, -1.2), hist)
    assert est.growth_exponent == pytest.approx(-2.2)
    assert est.smoothness_order == pytest.approx(1.2)
    assert est.heuristic
    # growth exponent -0.9 -> -0.1, -1.3 -> 0.3
    assert smoothness_estimate(_fake_fit(-0.9, 0.0), hist).smoothness_order == pytest.approx(-0.1)
    assert smoothness_estimate(_fake_fit(0.0, -1.3), hist).smoothness_order == pytest.approx(0.3)


def test_smoothness_rejects_supercritical():
    hist = SimpleNamespace(mode=1.0, bin_width=1e-3)
    v = GrowthVerdict(Growth.ABOVE, 0.1, 0.0)
    with pytest.raises(SupercriticalFitError):
        smoothness_estimate(_fake_fit(-1.0, -1.0, v), hist)


def test_smoothness_from_golden_fit(fit, gold):
    est = smoothness_estimate(fit, histogram(weyl_sums(gold, gold.q(20))))
    assert 1.0 < est.smoothness_order < 1.6
    assert est.uncertainty > 0


def test_zygmund_constant():
    rep = zygmund_estimators(np.full(1024, 3.7), 8)
    assert rep.zygmund_sup == rep.bvz_sup == rep.bqz_sup == 0.0


def test_zygmund_cosine():
    x = 2 * np.pi * np.arange(4096) / 4096
    rep = zygmund_estimators(np.cos(x), 10)
    # max over x, t of 2|cos x| (1 - cos t) / t is attained at t = pi and t = pi/2
    assert rep.zygmund_sup == pytest.approx(4 / np.pi, rel=1e-12)


def test_wedge():
    x = 2 * np.pi * np.arange(4096) / 4096
    f = np.minimum(x, 2 * np.pi - x)
    rep = zygmund_estimators(f, 10)
    assert rep.zygmund_sup == pytest.approx(2.0, rel=1e-12)
    assert rep.bqz_sup == pytest.approx(2 * np.pi ** 2, rel=1e-12)
    assert rep.bvz_sup == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.floats(-5, 5).filter(lambda c: abs(c) > 1e-3), st.floats(-10, 10), st.integers(0, 1023))
def test_zygmund_scaling_and_shift(c, shift, roll):
    x = 2 * np.pi * np.arange(1024) / 1024
    f = np.sin(3 * x) + 0.2 * np.abs(np.sin(x))
    base = zygmund_estimators(f, 8)
    g = zygmund_estimators(c * f + shift, 8)
    assert g.zygmund_sup == pytest.approx(abs(c) * base.zygmund_sup, rel=1e-9)
    assert g.bvz_sup == pytest.approx(abs(c) * base.bvz_sup, rel=1e-9)
    assert g.bqz_sup == pytest.approx(c * c * base.bqz_sup, rel=1e-9)
    assert zygmund_estimators(np.roll(f, roll), 8).zygmund_sup == pytest.approx(base.zygmund_sup, rel=1e-12)


def test_zygmund_running_maxima():
    rng = np.random.default_rng(7)
    rep = zygmund_estimators(rng.standard_normal(512), 9)
    for seq in (rep.zygmund_by_depth, rep.bvz_by_depth, rep.bqz_by_depth):
        assert seq == sorted(seq)


def test_zygmund_grid_checks():
    with pytest.raises(ValueError):
        zygmund_estimators(np.zeros(1000), 4)
    with pytest.raises(ValueError):
        zygmund_estimators(np.zeros(64), 7)


def test_cocycle_matrix():
    np.testing.assert_array_equal(cocycle_matrix(0), COCYCLE_A0)
    assert np.linalg.det(cocycle_matrix(0.37 + 0.1j)) == pytest.approx(1.0)


def test_cocycle_on_linearized_series(linearized_8192):
    assert cocycle_check(linearized_8192, 0.0, 1, r_ref=1.0) == 0.0
    for x in (0.3, 0.5j, -0.6 + 0.2j):
        assert cocycle_check(linearized_8192, x, 1) < 1e-13
        assert cocycle_check(linearized_8192, x, 25) < 1e-12


def test_cocycle_error_is_truncation(gold):
    # a short table only satisfies the relation up to its omitted tail
    x = 0.4
    errs = [cocycle_check(build_linearized(gold, N), x, 1, r_ref=1.0, tol=1.0) for N in (8, 16, 32)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-8


def test_cocycle_rejects_nonlinear(nonlinear_4096):
    with pytest.raises(ValueError):
        cocycle_check(nonlinear_4096, 0.1, 2)


@pytest.mark.parametrize("theta", [0.0, 0.9, 2.5, math.pi])
@pytest.mark.parametrize("rho", [0.05, 0.2, 0.35])
def test_mather_relation(nonlinear_4096, rho, theta):
    x = rho * complex(math.cos(theta), math.sin(theta))
    assert mather_relation_check(nonlinear_4096, x, r_ref=0.49) < 1e-14
    assert mather_relation_check(nonlinear_4096, x, r_ref=0.49, sign=-1.0) > 1e-4


def test_mather_rejects_linearized(linearized_8192):
    with pytest.raises(ValueError):
        mather_relation_check(linearized_8192, 0.1)
