"""Growth classification of scaled coefficients and bisection for r_alpha."""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from .rotation import RotationNumber
from .series import (MAX_ORDER, CoefficientTable, Kind, ScaledSequence, build_linearized,
                     build_nonlinear, evaluate_m, scale)

log = logging.getLogger(__name__)

SLOPE_FLOOR = 1e-4
NONLINEAR_CAP = 4.0 / math.e
LINEARIZED_CAP = 4.0


class Growth(enum.Enum):
    BELOW = "Below"
    ABOVE = "Above"
    CRITICAL = "Critical"


class InsufficientDataError(ValueError):
    pass


class NonBracketingError(ValueError):
    pass


@dataclass(frozen=True)
class GrowthVerdict:
    label: Growth
    tail_slope: float
    slope_stderr: float

    @property
    def eps(self) -> float:
        return max(2.0 * self.slope_stderr, SLOPE_FLOOR)


@dataclass(frozen=True)
class RadiusBracket:
    lo: float
    hi: float
    iterations: int
    N_used: int

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def as_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "iterations": self.iterations, "N": self.N_used}


def tail_fit(log_G: np.ndarray, window: float = 0.5) -> tuple[float, float]:
    """Least-squares slope of log_G[k] on k over the last ``window`` fraction, and its standard error."""
    N = len(log_G) - 1
    if N < 64:
        raise InsufficientDataError("need N >= 64 to classify growth")
    if not 0 < window <= 0.5:
        raise ValueError("window must be in (0, 1/2]")
    k = np.arange(math.ceil((1 - window) * N), N + 1, dtype=float)
    if len(k) < 16:
        raise InsufficientDataError(f"only {len(k)} points in the tail window")
    y = log_G[k.astype(int)]
    kc = k - k.mean()
    sxx = float(kc @ kc)
    slope = float(kc @ (y - y.mean())) / sxx
    resid = y - y.mean() - slope * kc
    stderr = math.sqrt(float(resid @ resid) / (len(k) - 2) / sxx)
    return slope, stderr


def classify_growth(seq: ScaledSequence, window: float = 0.5) -> GrowthVerdict:
    slope, stderr = tail_fit(seq.log_G, window)
    eps = max(2.0 * stderr, SLOPE_FLOOR)
    if slope > eps:
        label = Growth.ABOVE
    elif slope < -eps:
        label = Growth.BELOW
    else:
        label = Growth.CRITICAL
    return GrowthVerdict(label, slope, stderr)


def _build(rot: RotationNumber, N: int, kind: Kind) -> CoefficientTable:
    return build_nonlinear(rot, N) if kind is Kind.NONLINEAR else build_linearized(rot, N)


def estimate_radius(rot: RotationNumber, N: int = 4096, tol: float = 0.005,
                    kind: Kind = Kind.NONLINEAR, window: float = 0.5,
                    table: CoefficientTable | None = None, lo: float = 1e-6) -> RadiusBracket:
    """Bisect on the growth verdict of G(k, r) = F_k r^k.

    The coefficient table does not depend on r, so it is built once and
    every probe costs O(N).  A Critical verdict at the midpoint triggers
    one doubling of N; if it persists, the Below and Above edges are each
    refined toward the critical band separately.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    hi = NONLINEAR_CAP if kind is Kind.NONLINEAR else LINEARIZED_CAP
    if table is None or table.N < N or table.kind is not kind:
        table = _build(rot, N, kind)
    elif table.N > N:
        table = table.truncated(N)

    def verdict(r: float) -> Growth:
        return classify_growth(scale(table, r), window).label

    if verdict(hi) is not Growth.ABOVE:
        raise NonBracketingError(f"initial upper end r={hi} is not classified Above")
    if verdict(lo) is not Growth.BELOW:
        raise NonBracketingError(f"initial lower end r={lo} is not classified Below")

    it = 0
    doubled = False
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        it += 1
        v = verdict(mid)
        if v is Growth.BELOW:
            lo = mid
        elif v is Growth.ABOVE:
            hi = mid
        elif not doubled and 2 * table.N <= MAX_ORDER:
            doubled = True
            log.info("critical verdict at r=%g; doubling N to %d", mid, 2 * table.N)
            table = _build(rot, 2 * table.N, kind)
            if verdict(lo) is not Growth.BELOW or verdict(hi) is not Growth.ABOVE:
                raise NonBracketingError("bracket lost after doubling N")
        else:
            # the critical band sits inside [lo, hi]; squeeze both edges onto it
            c_lo = c_hi = mid
            while c_lo - lo > tol / 2:
                it += 1
                m = 0.5 * (lo + c_lo)
                if verdict(m) is Growth.BELOW:
                    lo = m
                else:
                    c_lo = m
            while hi - c_hi > tol / 2:
                it += 1
                m = 0.5 * (c_hi + hi)
                if verdict(m) is Growth.ABOVE:
                    hi = m
                else:
                    c_hi = m
            break
    return RadiusBracket(lo, hi, it, table.N)


@dataclass(frozen=True)
class AprioriReport:
    r: float
    M: float
    bound: float   # 4 M exp(-M)

    @property
    def holds(self) -> bool:
        return self.r <= self.bound

    @property
    def slack(self) -> float:
        return self.bound - self.r


def apriori_check(table: CoefficientTable, r: float, r_ref: float | None = None,
                  tol: float = 1e-12) -> AprioriReport:
    """Check r <= 4 M(r) exp(-M(r)) with M(r) = m(r)."""
    if r_ref is None:
        r_ref = table.radius_hint()
    M = float(evaluate_m(table, r, r_ref, tol).real)
    return AprioriReport(r, M, 4.0 * M * math.exp(-M))
