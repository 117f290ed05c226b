import math

import numpy as np
import pytest

from siegel.radius import (NONLINEAR_CAP, Growth, InsufficientDataError, NonBracketingError,
                           classify_growth, estimate_radius, tail_fit)
from siegel.rotation import golden, periodic, silver
from siegel.series import Kind, ScaledSequence, build_linearized, build_nonlinear, scale


def brute_force_radius(alpha: float, N: int = 600) -> float:
    """Plain double-precision recursion with D from float alpha, radius from the tail slope of ln F_k."""
    m = [0.0] * (N + 1)
    F = [1.0] + [0.0] * N
    for k in range(1, N + 1):
        m[k] = F[k - 1] / (4 * math.sin(math.pi * k * alpha) ** 2)
        F[k] = sum(j * m[j] * F[k - j] for j in range(1, k + 1)) / k
    k = np.arange(N // 2, N + 1)
    return math.exp(-np.polyfit(k, np.log(F[N // 2:]), 1)[0])


def test_tail_fit_exact_line():
    k = np.arange(201, dtype=float)
    slope, err = tail_fit(-0.3 * k + 2.0)
    assert slope == pytest.approx(-0.3, abs=1e-14)
    assert err < 1e-12


def test_tail_fit_window_start():
    # only k >= ceil(N/2) enters: a kink before N/2 must not matter
    k = np.arange(301, dtype=float)
    y = np.where(k < 150, 5 * k, -0.1 * k)
    assert tail_fit(y)[0] == pytest.approx(-0.1, abs=1e-14)


def test_classify_linearized_examples(gold):
    lin = build_linearized(gold, 4096)
    assert classify_growth(scale(lin, 1.2)).label is Growth.ABOVE
    assert classify_growth(scale(lin, 0.8)).label is Growth.BELOW


def test_classify_nonlinear_above(nonlinear_4096):
    v = classify_growth(scale(nonlinear_4096, 0.6))
    assert v.label is Growth.ABOVE and v.tail_slope > 0


def test_critical_for_flat_sequence():
    seq = ScaledSequence(1.0, np.zeros(257))
    v = classify_growth(seq)
    assert v.label is Growth.CRITICAL and v.eps == pytest.approx(1e-4)


def test_verdicts_monotone_in_r(nonlinear_4096):
    order = {Growth.BELOW: 0, Growth.CRITICAL: 1, Growth.ABOVE: 2}
    labels = [order[classify_growth(scale(nonlinear_4096, r)).label] for r in np.linspace(0.05, 1.4, 60)]
    assert labels == sorted(labels)


def test_insufficient_data(gold):
    with pytest.raises(InsufficientDataError):
        classify_growth(scale(build_nonlinear(gold, 40), 0.4))


def test_nonlinear_bracket(bracket_4096):
    assert bracket_4096.lo < bracket_4096.hi <= NONLINEAR_CAP
    assert bracket_4096.hi - bracket_4096.lo <= 0.005
    assert bracket_4096.N_used >= 4096
    assert set(bracket_4096.as_dict()) == {"lo", "hi", "iterations", "N"}


def test_bracket_agrees_with_brute_force(bracket_4096):
    ref = brute_force_radius((math.sqrt(5) - 1) / 2)
    assert abs(bracket_4096.mid - ref) < 0.01


def test_bracket_brackets_verdicts(nonlinear_4096, bracket_4096):
    t = nonlinear_4096
    assert classify_growth(scale(t, bracket_4096.lo)).label is Growth.BELOW
    assert classify_growth(scale(t, bracket_4096.hi)).label is not Growth.BELOW


def test_silver_bracket():
    b = estimate_radius(silver(), N=2048, tol=0.01)
    assert abs(b.mid - brute_force_radius(math.sqrt(2) - 1)) < 0.02


@pytest.mark.parametrize("rot", [golden(), silver(), periodic([1, 2])], ids=["golden", "silver", "1-2"])
def test_linearized_radius_is_one(rot):
    b = estimate_radius(rot, N=8192, tol=0.01, kind=Kind.LINEARIZED)
    assert 0.97 <= b.lo <= b.hi <= 1.03
    assert abs(b.mid - 1.0) < 0.01


def test_reuses_supplied_table(gold, nonlinear_4096):
    b = estimate_radius(gold, N=2048, table=nonlinear_4096, tol=0.01)
    assert b.N_used == 2048


def test_non_bracketing(gold, nonlinear_4096):
    with pytest.raises(NonBracketingError):
        estimate_radius(gold, N=4096, table=nonlinear_4096, lo=0.6)
    with pytest.raises(ValueError):
        estimate_radius(gold, tol=0.0)
