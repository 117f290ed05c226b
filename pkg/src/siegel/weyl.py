"""Weyl sums S(n) = sum_{j<=n} ln D(j) and their growth statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rotation import DenominatorCache, RotationNumber, ell, small_denominators

HIST_BINS = 2000
HIST_RANGE = (0.0, 2.0)


@dataclass(frozen=True)
class WeylSeries:
    S: np.ndarray            # S[n], n = 0..N, S[0] = 0
    rot: RotationNumber
    D: DenominatorCache

    @property
    def N(self) -> int:
        return len(self.S) - 1


def weyl_sums(rot: RotationNumber, N: int, D: DenominatorCache | None = None) -> WeylSeries:
    """Prefix sums of ln D(j) with Neumaier compensation."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if D is None or D.N < N:
        D = small_denominators(rot, N)
    S = np.empty(N + 1)
    S[0] = 0.0
    s = c = 0.0
    for n, v in enumerate(D.log_values[:N].tolist(), start=1):
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        S[n] = s + c
    S.setflags(write=False)
    return WeylSeries(S, rot, D)


@dataclass(frozen=True)
class EnvelopeReport:
    lower: list[tuple[int, int, float]]   # (j, q_j, S(q_j))
    upper: list[tuple[int, int, float]]   # (j, q_j - 1, S(q_j - 1))
    upper_slope_vs_logn: float
    j_min: int

    def lower_window(self, j_lo: int, j_hi: int) -> np.ndarray:
        return np.array([s for j, _, s in self.lower if j_lo <= j <= j_hi])

    def first_positive_index(self) -> int | None:
        """Smallest j0 with S(q_j) > 0 for every listed j >= j0."""
        j0 = None
        for j, _, s in self.lower:
            if s > 0:
                j0 = j if j0 is None else j0
            else:
                j0 = None
        return j0


def envelopes(ws: WeylSeries, rot: RotationNumber | None = None, j_min: int = 8) -> EnvelopeReport:
    """S at the closest returns q_j (lower envelope) and just before them (upper).

    The upper-envelope slope is a least-squares fit of S(q_j - 1) against
    ln q_j over j >= j_min.
    """
    rot = rot or ws.rot
    if ws.N < rot.q(min(5, rot.depth)):
        raise ValueError("Weyl series must reach at least q_5")
    lower, upper = [], []
    for j, q in rot.denominators(ws.N):
        lower.append((j, q, float(ws.S[q])))
        if q - 1 >= 1:
            upper.append((j, q - 1, float(ws.S[q - 1])))
    pts = [(math.log(n + 1), s) for j, n, s in upper if j >= j_min]
    if len(pts) >= 2:
        x, y = np.array(pts).T
        slope = float(np.polyfit(x, y, 1)[0])
    else:
        slope = float("nan")
    return EnvelopeReport(lower, upper, slope, j_min)


@dataclass(frozen=True)
class DistributionHistogram:
    edges: np.ndarray
    counts: np.ndarray
    underflow: int
    overflow: int
    K: int
    ratio: np.ndarray = field(repr=False)  # S(k)/ln k for k = 2..K

    @property
    def k_range(self) -> tuple[int, int]:
        return (2, self.K)

    @property
    def bin_width(self) -> float:
        return float(self.edges[1] - self.edges[0])

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def mode(self) -> float:
        return float(self.centers[int(np.argmax(self.counts))])

    @property
    def outside_fraction(self) -> float:
        return (self.underflow + self.overflow) / len(self.ratio)

    def argmax_k(self) -> int:
        return int(np.argmax(self.ratio)) + 2

    def argmin_k(self) -> int:
        return int(np.argmin(self.ratio)) + 2

    def symmetry(self, center: float = 1.0) -> dict:
        """Mean, median and the mass on either side of ``center`` inside [0, 2]."""
        inside = self.ratio[(self.ratio >= HIST_RANGE[0]) & (self.ratio <= HIST_RANGE[1])]
        return {
            "mean": float(self.ratio.mean()),
            "median": float(np.median(self.ratio)),
            "mass_below": float(np.mean(inside < center)),
            "mass_above": float(np.mean(inside >= center)),
        }


def histogram(ws: WeylSeries, K: int | None = None, bins: int = HIST_BINS) -> DistributionHistogram:
    """Histogram of S(k)/ln k, k = 2..K, on uniform bins covering [0, 2]."""
    K = ws.N if K is None else K
    if K > ws.N:
        raise ValueError(f"K={K} exceeds the Weyl series length {ws.N}")
    if K < 100:
        raise ValueError("K must be >= 100")
    k = np.arange(2, K + 1)
    ratio = ws.S[2:K + 1] / np.log(k)
    lo, hi = HIST_RANGE
    counts, edges = np.histogram(ratio, bins=bins, range=(lo, hi))
    under = int(np.sum(ratio < lo))
    over = int(np.sum(ratio > hi))
    return DistributionHistogram(edges, counts.astype(np.int64), under, over, K, ratio)


@dataclass(frozen=True)
class FourierReport:
    K: int
    grid: int
    delta: float
    max_error: float
    quad_delta: float
    quadrature: float


def fourier_partial_sum(x: np.ndarray, K: int, chunk: int = 256) -> np.ndarray:
    """-sum_{k<=K} 2 cos(kx)/k, summed smallest terms first."""
    x = np.asarray(x, dtype=float)
    k = np.arange(K, 0, -1, dtype=float)
    out = np.empty_like(x)
    for s in range(0, x.size, chunk):
        xs = x[s:s + chunk]
        out[s:s + chunk] = -(2.0 * np.cos(np.outer(xs, k)) / k).sum(axis=1)
    return out


def fourier_check(K: int = 10_000, grid: int = 1024, delta: float = 0.1,
                  quad_delta: float = 1e-4, quad_points: int = 2_000_001) -> FourierReport:
    """Compare ell(x) with its truncated cosine series away from x = 0 mod 2 pi.

    Also integrates ell over [quad_delta, 2 pi - quad_delta] by the
    trapezoid rule; the full integral vanishes.
    """
    if K < 1 or grid < 16:
        raise ValueError("need K >= 1 and grid >= 16")
    x = np.linspace(delta, 2 * np.pi - delta, grid)
    err = float(np.max(np.abs(fourier_partial_sum(x, K) - ell(x))))
    xq = np.linspace(quad_delta, 2 * np.pi - quad_delta, quad_points)
    quad = float(np.trapezoid(ell(xq), xq))
    return FourierReport(K, grid, delta, err, quad_delta, quad)
