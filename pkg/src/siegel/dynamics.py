"""Orbits of T(z, w) = (c z, w (1 - z)) with c = exp(2 pi i alpha)."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .rotation import RotationNumber


class SingularOrbitError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Orbit:
    z0: complex
    w0: complex
    n: int
    log_abs_w: np.ndarray          # ln|w_k|, k = 0..n
    frac_k_alpha: np.ndarray = field(repr=False)   # frac(k alpha), k = 0..n
    rot: RotationNumber | None = field(default=None, repr=False)

    def z(self, k: int) -> complex:
        return self.z0 * cmath.exp(2j * math.pi * float(self.frac_k_alpha[k]))


def _fracs(rot: RotationNumber, n: int) -> np.ndarray:
    P, Q = rot.convergents[-1]
    out = np.empty(n + 1)
    r = 0
    for k in range(n + 1):
        out[k] = r / Q
        r += P
        if r >= Q:
            r -= Q
    return out


def iterate_T(z0: complex, w0: complex, n: int, rot: RotationNumber) -> Orbit:
    """ln|w_k| accumulated from ln|1 - c^k z0|, with c^k taken from the exact residue of k alpha.

    |1 - rho e^{i phi}|^2 = (1 - rho)^2 + 4 rho sin^2(phi/2) keeps the
    increments accurate near resonances.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    z0, w0 = complex(z0), complex(w0)
    if w0 == 0:
        raise SingularOrbitError("w0 = 0 is fixed at w = 0; ln|w| is undefined")
    fr = _fracs(rot, n)
    rho = abs(z0)
    phi0 = cmath.phase(z0) if rho else 0.0
    phi = 2 * np.pi * fr[:n] + phi0
    sq = (1.0 - rho) ** 2 + 4.0 * rho * np.sin(phi / 2) ** 2
    if np.any(sq == 0.0):
        k = int(np.flatnonzero(sq == 0.0)[0])
        raise SingularOrbitError(f"1 - c^{k} z0 = 0: z0 lies on the backward orbit of 1")
    inc = 0.5 * np.log(sq)
    logw = np.empty(n + 1)
    logw[0] = math.log(abs(w0))
    logw[1:] = logw[0] + np.cumsum(inc)
    return Orbit(z0, w0, n, logw, fr, rot)


@dataclass(frozen=True)
class OrbitSummary:
    max: float
    min: float
    argmax: int
    argmin: int
    lower_envelope: list[int]     # k <= n/2 whose value is below every later value
    upper_records: list[int]      # k whose value exceeds every earlier value
    near_convergent: dict[int, bool]


def orbit_statistics(orbit: Orbit, rot: RotationNumber | None = None) -> OrbitSummary:
    """Extremes of ln|w_k| over k >= 1 and their relation to the denominators q_j."""
    rot = rot or orbit.rot
    v = orbit.log_abs_w[1:]
    ks = np.arange(1, orbit.n + 1)
    suffix_min = np.minimum.accumulate(v[::-1])[::-1]
    # near the end of the orbit there is too little future to compare against
    half = orbit.n // 2
    lower = [int(k) for k, x, m in zip(ks[:half], v[:half], suffix_min[1:half + 1]) if x < m]
    prefix_max = np.maximum.accumulate(v)
    upper = [1] + [int(k) for k, x, m in zip(ks[1:], v[1:], prefix_max[:-1]) if x > m]
    qs = [q for _, q in rot.denominators(orbit.n + 1)] if rot else []
    flags = {k: any(abs(k - q) <= 1 for q in qs) for k in sorted(set(lower) | set(upper))}
    return OrbitSummary(float(v.max()), float(v.min()), int(ks[np.argmax(v)]), int(ks[np.argmin(v)]),
                        lower, upper, flags)
