import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from siegel.dynamics import SingularOrbitError, iterate_T, orbit_statistics
from siegel.rotation import golden


def direct_orbit(z0, w0, n, alpha):
    c = cmath.exp(2j * math.pi * alpha)
    z, w = z0, w0
    out = [math.log(abs(w))]
    for _ in range(n):
        z, w = c * z, w * (1 - z)
        out.append(math.log(abs(w)))
    return np.array(out)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 1.5), st.floats(-math.pi, math.pi), st.floats(0.1, 10.0))
def test_against_direct_iteration(rho, phi, w0):
    rot = golden()
    z0 = cmath.rect(rho, phi)
    alpha = rot.alpha.numerator / rot.alpha.denominator
    ref = direct_orbit(z0, w0, 60, alpha)
    orb = iterate_T(z0, w0, 60, rot)
    np.testing.assert_allclose(orb.log_abs_w, ref, atol=1e-11)


def test_z_rotates(gold):
    orb = iterate_T(0.7 + 0.2j, 1.0, 10, gold)
    assert orb.z(0) == pytest.approx(0.7 + 0.2j)
    assert orb.z(1) == pytest.approx(gold.lam * (0.7 + 0.2j), abs=1e-15)
    assert all(abs(orb.z(k)) == pytest.approx(abs(0.7 + 0.2j)) for k in range(11))


def test_zero_z_keeps_w(gold):
    orb = iterate_T(0.0, 2.0, 100, gold)
    assert np.all(orb.log_abs_w == math.log(2.0))


def test_singular_orbits(gold):
    with pytest.raises(SingularOrbitError):
        iterate_T(0.5, 0.0, 10, gold)
    with pytest.raises(SingularOrbitError):
        iterate_T(1.0, 1.0, 10, gold)
    with pytest.raises(ValueError):
        iterate_T(0.5, 1.0, 0, gold)


def test_orbit_of_lambda_is_half_weyl_sum(gold, weyl_q20):
    # z0 = lambda gives |w_n| = prod_{j<=n} |1 - lambda^j|, i.e. ln|w_n| = S(n)/2
    orb = iterate_T(gold.lam, 1.0, 10946, gold)
    np.testing.assert_allclose(orb.log_abs_w, weyl_q20.S / 2, atol=1e-11)


def test_unit_circle_extremes_at_denominators(gold):
    s = orbit_statistics(iterate_T(gold.lam, 1.0, 10946, gold))
    assert s.lower_envelope == [1, 3, 8, 21, 55, 144, 377, 987, 2584]
    fib = {gold.q(j) for j in range(1, 21)}
    assert all(k + 1 in fib for k in s.upper_records)
    assert all(s.near_convergent.values())
    assert s.argmax == 10945


def test_statistics_fields(gold):
    orb = iterate_T(-1.0, 1.0, 1000, gold)
    s = orbit_statistics(orb)
    v = orb.log_abs_w[1:]
    assert s.max == v.max() and s.min == v.min()
    assert v[s.argmax - 1] == s.max and v[s.argmin - 1] == s.min
    assert s.upper_records[0] == 1
    assert all(k <= 500 for k in s.lower_envelope)
