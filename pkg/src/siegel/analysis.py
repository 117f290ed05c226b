"""Regression of coefficient growth on Weyl sums, regularity estimators and identity checks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .radius import Growth, GrowthVerdict, classify_growth
from .rotation import RotationNumber
from .series import CoefficientTable, Kind, ScaledSequence, evaluate_m
from .weyl import DistributionHistogram, WeylSeries

DEFAULT_K_MIN = 32


class RankDeficientError(np.linalg.LinAlgError):
    pass


class SupercriticalFitError(ValueError):
    """Smoothness estimates need a fit at or below the critical radius."""


@dataclass(frozen=True)
class FitResult:
    a: float   # weight of S(k)
    b: float   # weight of k
    c: float   # intercept
    d: float   # weight of ln k
    k: np.ndarray
    log_G: np.ndarray
    S: np.ndarray
    prediction: np.ndarray
    residuals: np.ndarray
    covariance: np.ndarray
    verdict: GrowthVerdict | None = None

    @property
    def coefficients(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    @property
    def rms_residual(self) -> float:
        return float(np.sqrt(np.mean(self.residuals ** 2)))

    @property
    def k_range(self) -> tuple[int, int]:
        return (int(self.k[0]), int(self.k[-1]))

    def peak_indices(self, count: int = 8, separation: int = 8) -> list[int]:
        """Indices of the ``count`` largest |residual| values, at least ``separation`` apart."""
        order = np.argsort(-np.abs(self.residuals), kind="stable")
        picked: list[int] = []
        for i in order:
            k = int(self.k[i])
            if all(abs(k - p) >= separation for p in picked):
                picked.append(k)
                if len(picked) == count:
                    break
        return picked

    def peaks_at_convergents(self, rot: RotationNumber, count: int = 8,
                             rel: float = 0.002, slack: int = 2) -> list[tuple[int, int | None]]:
        """Pair each residual peak with a q_n within max(slack, rel*q_n), or None."""
        qs = [q for _, q in rot.denominators(int(self.k[-1]) + 1)]
        out = []
        for k in self.peak_indices(count):
            near = [q for q in qs if abs(k - q) <= max(slack, rel * q)]
            out.append((k, near[0] if near else None))
        return out


def fit_log_growth(seq: ScaledSequence, ws: WeylSeries, k_min: int = DEFAULT_K_MIN) -> FitResult:
    """Least squares ln G(k) ~ a S(k) + b k + c + d ln k over k_min <= k <= N."""
    if k_min < 2:
        raise ValueError("k_min must be >= 2 (ln 1 = 0)")
    N = seq.N
    if ws.N < N:
        raise ValueError("Weyl series shorter than the coefficient sequence")
    k = np.arange(k_min, N + 1)
    if len(k) < 4:
        raise RankDeficientError("fewer data points than regressors")
    kf = k.astype(float)
    A = np.column_stack([ws.S[k], kf, np.ones_like(kf), np.log(kf)])
    if np.linalg.matrix_rank(A) < 4:
        raise RankDeficientError("regressors are collinear on this range")
    y = seq.log_G[k]
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    pred = A @ coef
    res = y - pred
    dof = max(len(k) - 4, 1)
    cov = np.linalg.inv(A.T @ A) * float(res @ res) / dof
    try:
        verdict = classify_growth(seq)
    except ValueError:
        verdict = None
    a, b, c, d = (float(v) for v in coef)
    return FitResult(a, b, c, d, k, y, ws.S[k].copy(), pred, res, cov, verdict)


@dataclass(frozen=True)
class RegularityEstimate:
    growth_exponent: float
    smoothness_order: float
    uncertainty: float
    mode: float
    heuristic: bool = True


def smoothness_estimate(fit: FitResult, hist: DistributionHistogram) -> RegularityEstimate:
    """Heuristic boundary regularity from the fitted growth law.

    With S(k) ~ mode * ln k the fit predicts ln G(k) ~ (a*mode + d) ln k,
    and coefficients decaying like k^-(p+1) suggest regularity of order p.
    """
    if fit.verdict is not None and fit.verdict.label is Growth.ABOVE:
        raise SupercriticalFitError("fit radius is above the radius of convergence")
    mode = hist.mode
    g = fit.a * mode + fit.d
    va, vd, cad = fit.covariance[0, 0], fit.covariance[3, 3], fit.covariance[0, 3]
    half_bin = hist.bin_width / 2
    var = mode ** 2 * va + vd + 2 * mode * cad + (fit.a * half_bin) ** 2
    return RegularityEstimate(g, -g - 1.0, math.sqrt(max(var, 0.0)), mode)


@dataclass(frozen=True)
class ZygmundReport:
    zygmund_sup: float
    bvz_sup: float
    bqz_sup: float
    partition_depths: list[int]
    zygmund_by_depth: list[float]
    bvz_by_depth: list[float]
    bqz_by_depth: list[float]


def zygmund_estimators(samples, depth: int) -> ZygmundReport:
    """Discrete Zygmund, BVZ and BQZ statistics of a function sampled on a uniform circle grid.

    Zygmund: max of |f(x+t) + f(x-t) - 2 f(x)| / t over grid x and t = 2 pi 2^-j.
    BVZ and BQZ use the nested dyadic partitions with 2^j cells, so the
    reported suprema are lower bounds for the sup over all partitions.
    The per-depth lists are running maxima.
    """
    f = np.asarray(samples, dtype=float)
    M = f.size
    if M < 2 or M & (M - 1):
        raise ValueError("grid size must be a power of two")
    if depth < 1 or M < 2 ** depth:
        raise ValueError("grid must have at least 2**depth points")
    zyg, bvz, bqz = [], [], []
    z_run = v_run = q_run = 0.0
    for j in range(1, depth + 1):
        s = M >> j                         # grid shift for t = 2 pi 2^-j
        t = 2 * np.pi / 2 ** j
        second = np.abs(np.roll(f, -s) + np.roll(f, s) - 2 * f)
        z_run = max(z_run, float(second.max()) / t)
        nodes = f[::s]
        nxt = np.roll(nodes, -1)
        q_run = max(q_run, float(np.sum((nodes - nxt) ** 2)))
        if s >= 2:
            mids = f[s // 2::s]
            v_run = max(v_run, float(np.sum(np.abs(nodes + nxt - 2 * mids))))
        zyg.append(z_run)
        bvz.append(v_run)
        bqz.append(q_run)
    return ZygmundReport(z_run, v_run, q_run, list(range(1, depth + 1)), zyg, bvz, bqz)


COCYCLE_A0 = np.array([[2.0, -1.0], [1.0, 0.0]])


def cocycle_matrix(x: complex) -> np.ndarray:
    return np.array([[2.0 - x, -1.0], [1.0, 0.0]], dtype=complex)


def cocycle_check(table: CoefficientTable, x: complex, n: int, r_ref: float = 1.0,
                  tol: float = 1e-12) -> float:
    """Max deviation between V(lambda^j x) from the series and A(lambda^{j-1}x)...A(x) V(x), j <= n."""
    if table.kind is not Kind.LINEARIZED:
        raise ValueError("the cocycle form holds for the linearized table")
    if n < 1:
        raise ValueError("n must be >= 1")
    lam = table.rot.lam
    pts = x * lam ** np.arange(-1, n + 1)        # x/lambda, x, lambda x, ..., lambda^n x
    mv = evaluate_m(table, pts, r_ref, tol)
    V = np.array([mv[1], mv[0]])
    dev = 0.0
    for j in range(1, n + 1):
        V = cocycle_matrix(pts[j]) @ V
        direct = np.array([mv[j + 1], mv[j]])
        dev = max(dev, float(np.max(np.abs(V - direct))))
    return dev


def mather_relation_check(table: CoefficientTable, x: complex, r_ref: float | None = None,
                          tol: float = 1e-14, sign: float = 1.0) -> float:
    """|Z(lambda x) Z(x/lambda) - Z(x)^2 exp(-sign * Z(x))| with Z(x) = x exp(m(x)).

    ``sign=-1`` gives the perturbed identity used as a negative control.
    """
    if table.kind is not Kind.NONLINEAR:
        raise ValueError("the product relation is stated for the nonlinear table")
    if r_ref is None:
        r_ref = table.radius_hint()
    lam = table.rot.lam
    pts = np.array([x, lam * x, x / lam], dtype=complex)
    m0, mp, mm = evaluate_m(table, pts, r_ref, tol)
    Z0 = pts[0] * np.exp(m0)
    lhs = pts[1] * np.exp(mp) * pts[2] * np.exp(mm)
    rhs = Z0 ** 2 * np.exp(-sign * Z0)
    return float(abs(lhs - rhs))
