"""Samples of the Siegel disk embedding on circles |x| = r and polyline geometry tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .series import CoefficientTable, Kind, evaluate_on_circle

NEAR_BOUNDARY_FRACTION = 0.99

# generic real projection C^2 = R^4 -> R^2 applied to (Re Z, Im Z, Re W', Im W'), W' = W - lambda
GAMMA_PROJECTION = np.array([[1.0, 0.0, 0.37, -0.21],
                             [0.0, 1.0, 0.17, 0.43]])


class PhaseUnwrapError(ArithmeticError):
    pass


@dataclass(frozen=True)
class BoundaryCurve:
    r: float
    thetas: np.ndarray
    Z_vals: np.ndarray    # Z(x) = x exp(m(x))
    M_vals: np.ndarray    # m(lambda x) - m(x)
    W_vals: np.ndarray    # lambda exp(M_vals) = Z(lambda x)/Z(x)
    m_vals: np.ndarray
    m_fwd: np.ndarray     # m(lambda x)
    m_back: np.ndarray    # m(x/lambda)
    lam: complex
    r_ref: float

    @property
    def x(self) -> np.ndarray:
        return self.r * np.exp(1j * self.thetas)

    @property
    def W_at_x(self) -> np.ndarray:
        """Second coordinate of the disk point over x: lambda exp(m(x) - m(x/lambda))."""
        return self.lam * np.exp(self.m_vals - self.m_back)

    @property
    def samples(self) -> int:
        return len(self.thetas)


def _grid(samples: int) -> np.ndarray:
    return 2 * np.pi * np.arange(samples) / samples


def gamma_curve(table: CoefficientTable, r: float, samples: int = 8192,
                r_ref: float | None = None, tol: float = 1e-10) -> BoundaryCurve:
    if table.kind is not Kind.NONLINEAR:
        raise ValueError("boundary curves need the nonlinear table")
    if samples < 8:
        raise ValueError("need at least 8 samples")
    if r_ref is None:
        r_ref = table.radius_hint()
    if r > 0.999 * r_ref:
        raise ValueError(f"r={r} is too close to the reference radius {r_ref}")
    th = _grid(samples)
    x = r * np.exp(1j * th)
    lam = table.rot.lam
    m0 = evaluate_on_circle(table, r, samples, r_ref, 1.0, tol)
    mf = evaluate_on_circle(table, r, samples, r_ref, lam, tol)
    mb = evaluate_on_circle(table, r, samples, r_ref, 1 / lam, tol)
    Z = x * np.exp(m0)
    M = mf - m0
    return BoundaryCurve(float(r), th, Z, M, lam * np.exp(M), m0, mf, mb, lam, float(r_ref))


def siegel_map(Z, W):
    """(Z, W) -> (Z W e^-Z, W e^-Z)."""
    e = np.exp(-Z)
    return Z * W * e, W * e


def dynamics_consistency(table: CoefficientTable, curve: BoundaryCurve,
                         tol: float = np.inf) -> float:
    """Max distance between T(Z(x), W(x)) and (Z(lambda x), W(lambda x)) over the grid.

    The right side is evaluated directly at lambda x, i.e. at angle
    theta + 2 pi alpha, so this measures how well the truncated series
    semi-conjugates the rotation to the map.
    """
    lam = curve.lam
    Zt, Wt = siegel_map(curve.Z_vals, curve.W_at_x)
    x1 = lam * curve.x
    Z1 = x1 * np.exp(curve.m_fwd)
    W1 = lam * np.exp(curve.m_fwd - curve.m_vals)
    return float(max(np.max(np.abs(Zt - Z1)), np.max(np.abs(Wt - W1))))


def winding_number(points: np.ndarray, center: complex = 0.0) -> int:
    """Winding number of the closed polyline about ``center``."""
    z = np.asarray(points) - center
    d = np.angle(np.roll(z, -1) / z)
    return int(round(float(d.sum()) / (2 * np.pi)))


@dataclass(frozen=True)
class Crossing:
    i: int
    j: int
    distance4d: float | None = None


def _segments_cross(p, q, P, Q) -> np.ndarray:
    def orient(a, b, c):
        return np.sign((b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1])
                       - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0]))
    o1 = orient(p, q, P)
    o2 = orient(p, q, Q)
    o3 = orient(P, Q, p)
    o4 = orient(P, Q, q)
    return (o1 * o2 < 0) & (o3 * o4 < 0)


def polyline_crossings(xy: np.ndarray, chunk: int = 256) -> list[tuple[int, int]]:
    """Proper crossings between non-adjacent segments of the closed polyline xy (n x 2)."""
    xy = np.asarray(xy, dtype=float)
    n = len(xy)
    a = xy
    b = np.roll(xy, -1, axis=0)
    # axis-aligned bounding boxes prune most pairs
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    out = []
    for s in range(0, n, chunk):
        i = np.arange(s, min(s + chunk, n))
        j = np.arange(n)
        mask = (j[None, :] > i[:, None] + 1)
        mask &= ~((i[:, None] == 0) & (j[None, :] == n - 1))
        mask &= (lo[i, None, 0] <= hi[None, :, 0]) & (lo[None, :, 0] <= hi[i, None, 0])
        mask &= (lo[i, None, 1] <= hi[None, :, 1]) & (lo[None, :, 1] <= hi[i, None, 1])
        ii, jj = np.nonzero(mask)
        if ii.size == 0:
            continue
        I, J = i[ii], j[jj]
        hit = _segments_cross(a[I], b[I], a[J], b[J])
        out.extend(zip(I[hit].tolist(), J[hit].tolist()))
    return out


def self_intersection_test(curve: BoundaryCurve | np.ndarray, plane: str = "Z") -> list[Crossing]:
    """Segment crossings of the Z-plane projection, or of a generic projection of Gamma.

    Plain complex arrays are treated as a Z-plane polyline.  In the Gamma
    plane each crossing also carries the R^4 distance between the two
    segment midpoints, to tell projection artefacts from true contacts.
    """
    if isinstance(curve, BoundaryCurve):
        if curve.samples < 64:
            raise ValueError("need at least 64 samples")
        Z = curve.Z_vals
    else:
        Z = np.asarray(curve, dtype=complex)
    if plane == "Z":
        xy = np.column_stack([Z.real, Z.imag])
        return [Crossing(i, j) for i, j in polyline_crossings(xy)]
    if plane != "Gamma" or not isinstance(curve, BoundaryCurve):
        raise ValueError("plane must be 'Z' or 'Gamma' (the latter needs a BoundaryCurve)")
    Wc = curve.W_vals - curve.lam
    R4 = np.column_stack([Z.real, Z.imag, Wc.real, Wc.imag])
    xy = R4 @ GAMMA_PROJECTION.T
    mid = 0.5 * (R4 + np.roll(R4, -1, axis=0))
    return [Crossing(i, j, float(np.linalg.norm(mid[i] - mid[j])))
            for i, j in polyline_crossings(xy)]


@dataclass(frozen=True)
class PhaseCurve:
    thetas: np.ndarray
    phase: np.ndarray    # unwrapped arg F(r e^{i theta})
    winding: int

    @property
    def monotone(self) -> bool:
        d = np.diff(self.phase)
        return bool(np.all(d >= 0) or np.all(d <= 0))


def f_phase_curve(table: CoefficientTable, r: float, samples: int = 8192,
                  r_ref: float | None = None, tol: float = 1e-10) -> PhaseCurve:
    """Unwrapped phase of F = exp(m) along |x| = r.

    Since arg F = Im m up to multiples of 2 pi, the unwrapped phase is
    checked against Im m; a mismatch means the grid is too coarse.
    """
    if r_ref is None:
        r_ref = table.radius_hint()
    th = _grid(samples)
    m = evaluate_on_circle(table, r, samples, r_ref, 1.0, tol)
    raw = np.angle(np.exp(m))
    phase = np.unwrap(raw)
    phase += 2 * np.pi * round(float(m[0].imag - phase[0]) / (2 * np.pi))
    if np.max(np.abs(phase - m.imag)) > 1e-6:
        raise PhaseUnwrapError("adjacent samples differ by more than pi; increase samples")
    closing = np.angle(np.exp(1j * (phase[0] - phase[-1])))
    total = phase[-1] - phase[0] + closing
    return PhaseCurve(th, phase, int(round(total / (2 * np.pi))))
