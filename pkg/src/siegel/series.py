"""Power-series coefficients of m and F = exp(m) for the Siegel master equation.

Coefficients grow or decay geometrically (like r_alpha**-k), so everything
is stored as natural logarithms and positive sums are taken with a
running-maximum log-sum-exp.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .rotation import DenominatorCache, RotationNumber, small_denominators

log = logging.getLogger(__name__)

DEFAULT_ORDER = 4096
MAX_ORDER = 200_000
WARN_ORDER = 20_000


class Kind(enum.Enum):
    NONLINEAR = "nonlinear"
    LINEARIZED = "linearized"


class TailBoundError(ArithmeticError):
    """The truncated series cannot certify the requested accuracy at |x|."""


@dataclass(frozen=True)
class CoefficientTable:
    kind: Kind
    log_m: np.ndarray   # ln m_k, k = 0..N (-inf where m_k = 0)
    log_F: np.ndarray   # ln F_k; for the linearized problem F is m itself
    rot: RotationNumber
    D: DenominatorCache

    @property
    def N(self) -> int:
        return len(self.log_m) - 1

    @property
    def m(self) -> np.ndarray:
        # overflows to inf past roughly k ~ 700/ln(1/r_alpha)
        with np.errstate(over="ignore"):
            return np.exp(self.log_m)

    @property
    def F(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(self.log_F)

    def truncated(self, N: int) -> "CoefficientTable":
        """The table of order N <= self.N (the recursion is triangular)."""
        if not 1 <= N <= self.N:
            raise ValueError(f"order must be in [1, {self.N}]")
        return CoefficientTable(self.kind, self.log_m[: N + 1], self.log_F[: N + 1], self.rot, self.D)

    def radius_hint(self, window: float = 0.5) -> float:
        """exp(-slope) of a least-squares line through the tail of ln F_k."""
        N = self.N
        k = np.arange(math.ceil((1 - window) * N), N + 1)
        slope = np.polyfit(k, self.log_F[k], 1)[0]
        return math.exp(-slope)


@dataclass(frozen=True)
class ScaledSequence:
    r: float
    log_G: np.ndarray

    @property
    def N(self) -> int:
        return len(self.log_G) - 1


def _check_order(N: int) -> None:
    if N < 1:
        raise ValueError("order N must be >= 1")
    if N > MAX_ORDER:
        raise ValueError(f"order {N} exceeds the hard cap {MAX_ORDER}")
    if N > WARN_ORDER:
        log.warning("order N=%d: the O(N^2) recursion will take a long time", N)


def build_nonlinear(rot: RotationNumber, N: int, D: DenominatorCache | None = None) -> CoefficientTable:
    """m_{k+1} = F_k / D(k+1) and k F_k = sum_{j=1}^k j m_j F_{k-j}, with m_0 = 0, F_0 = 1."""
    _check_order(N)
    if D is None or D.N < N:
        D = small_denominators(rot, N)
    logD = D.log_values
    log_m = np.full(N + 1, -np.inf)
    log_F = np.full(N + 1, -np.inf)
    log_F[0] = 0.0
    # log_jm[j-1] = ln(j m_j); filled as the recursion advances
    log_jm = np.full(N, -np.inf)
    log_j = np.log(np.arange(1, N + 1, dtype=float))
    for k in range(1, N + 1):
        log_m[k] = log_F[k - 1] - logD[k - 1]
        log_jm[k - 1] = log_j[k - 1] + log_m[k]
        # F_{k-j} for j = 1..k is log_F[k-1], ..., log_F[0]
        log_F[k] = logsumexp(log_jm[:k] + log_F[k - 1::-1]) - log_j[k - 1]
    log_m.setflags(write=False)
    log_F.setflags(write=False)
    return CoefficientTable(Kind.NONLINEAR, log_m, log_F, rot, D)


def build_linearized(rot: RotationNumber, N: int, D: DenominatorCache | None = None) -> CoefficientTable:
    """m_k = 1 / prod_{j<=k} D(j), the solution with m(0) = 1."""
    _check_order(N)
    if D is None or D.N < N:
        D = small_denominators(rot, N)
    log_m = np.empty(N + 1)
    log_m[0] = 0.0
    log_m[1:] = -np.cumsum(D.log_values[:N])
    log_m.setflags(write=False)
    return CoefficientTable(Kind.LINEARIZED, log_m, log_m, rot, D)


def scale(table: CoefficientTable, r: float) -> ScaledSequence:
    if not r > 0:
        raise ValueError("radius must be positive")
    k = np.arange(table.N + 1)
    return ScaledSequence(float(r), table.log_F + k * math.log(r))


def master_residual(table: CoefficientTable, r: float, k: int) -> float:
    """Relative residual of k G(k,r) = r sum_{j=1}^k j G(j-1,r)/D(j) G(k-j,r)."""
    if not 1 <= k <= table.N:
        raise ValueError(f"k must be in [1, {table.N}]")
    lg = scale(table, r).log_G
    j = np.arange(1, k + 1)
    rhs = math.log(r) + logsumexp(np.log(j) + lg[j - 1] - table.D.log_values[j - 1] + lg[k - j])
    lhs = math.log(k) + lg[k]
    return abs(math.expm1(rhs - lhs))


verify_master = master_residual


def _tail_bound(table: CoefficientTable, rho: float, r_ref: float) -> float:
    if rho == 0.0:
        return 0.0
    N = table.N
    lo = max(1, N - max(N // 8, 1))
    tail = np.max(table.log_F[lo:] + np.arange(lo, N + 1) * math.log(rho))
    return math.exp(min(tail, 700.0)) / (1.0 - rho / r_ref)


def evaluate_m(table: CoefficientTable, x, r_ref: float, tol: float = 1e-12,
               return_bound: bool = False):
    """Partial sum of m(x) = sum_k m_k x^k at scalar or array x.

    The neglected tail is bounded by max_{tail k} F_k |x|^k / (1 - |x|/r_ref);
    TailBoundError is raised when that exceeds ``tol`` (pass tol=inf to skip).
    """
    xa = np.atleast_1d(np.asarray(x, dtype=complex))
    rho = float(np.max(np.abs(xa))) if xa.size else 0.0
    if rho >= r_ref:
        raise TailBoundError(f"|x| = {rho} is not inside the reference radius {r_ref}")
    bound = _tail_bound(table, rho, r_ref)
    if bound >= tol:
        raise TailBoundError(
            f"tail bound {bound:.3e} >= tol {tol:.1e} at |x| = {rho}; increase N or reduce |x|")
    vals = _power_sum(table.log_m, xa)
    out = vals.reshape(np.shape(x)) if np.ndim(x) else vals[0]
    return (out, bound) if return_bound else out


def _power_sum(log_c: np.ndarray, xa: np.ndarray, chunk: int = 256) -> np.ndarray:
    """sum_k c_k x^k with c_k = exp(log_c[k]) >= 0, overflow-safe via complex logs."""
    out = np.empty(xa.shape, dtype=complex)
    k = np.arange(len(log_c), dtype=float)
    finite = np.isfinite(log_c)
    const = np.exp(log_c[0]) if finite[0] else 0.0
    ks, lc = k[1:][finite[1:]], log_c[1:][finite[1:]]
    for s in range(0, xa.size, chunk):
        xs = xa[s:s + chunk]
        nz = xs != 0
        res = np.full(xs.shape, const, dtype=complex)
        if np.any(nz):
            lx = np.log(xs[nz])
            expo = lc[None, :] + ks[None, :] * lx[:, None]
            # terms below e^-60 of the largest cannot affect a double-precision sum
            cut = expo.real < (expo.real.max(axis=1, keepdims=True) - 60.0)
            terms = np.exp(np.where(cut, -np.inf, expo))
            res[nz] += terms.sum(axis=1)
        out[s:s + chunk] = res
    return out


def evaluate_on_circle(table: CoefficientTable, r: float, samples: int, r_ref: float,
                       twist: complex = 1.0, tol: float = 1e-12) -> np.ndarray:
    """m(twist * r * e^{2 pi i j/samples}) for j < samples, |twist| = 1, by one FFT.

    Coefficients beyond the grid size are folded modulo ``samples`` (exact
    aliasing of e^{ik theta_j}).  Same tail-bound contract as evaluate_m.
    """
    if r >= r_ref:
        raise TailBoundError(f"|x| = {r} is not inside the reference radius {r_ref}")
    bound = _tail_bound(table, r, r_ref)
    if bound >= tol:
        raise TailBoundError(
            f"tail bound {bound:.3e} >= tol {tol:.1e} at |x| = {r}; increase N or reduce |x|")
    k = np.arange(table.N + 1)
    with np.errstate(over="ignore"):
        a = np.exp(table.log_m + k * math.log(r)) * np.asarray(twist, dtype=complex) ** k
    folded = np.zeros(samples, dtype=complex)
    np.add.at(folded, k % samples, a)
    return np.fft.ifft(folded) * samples


def m_max_modulus(table: CoefficientTable, r: float, r_ref: float, tol: float = 1e-12) -> float:
    """M(r) = max_{|x|=r} |m(x)| = m(r) by positivity of the coefficients."""
    return float(evaluate_m(table, r, r_ref, tol).real)


def series_exp(log_c: np.ndarray, N: int, rho: float) -> np.ndarray:
    """Coefficients of exp(c(x)) up to x^N by summing c^n/n!, for c(0) = 0.

    Works on the rescaled series c_k rho^k to stay in range and returns
    ln of the (unscaled) coefficients.  O(N^3); meant as an independent
    cross-check of the exponential convolution for small N.
    """
    k = np.arange(N + 1)
    c = np.exp(log_c[: N + 1] + k * math.log(rho))
    c[0] = 0.0
    out = np.zeros(N + 1)
    out[0] = 1.0
    term = np.zeros(N + 1)
    term[0] = 1.0
    for n in range(1, N + 1):
        term = np.convolve(term, c)[: N + 1] / n  # c^n / n!
        out += term
    return np.log(out) - k * math.log(rho)
