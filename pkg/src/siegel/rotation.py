"""Continued-fraction rotation numbers and the small denominators D(k).

A rotation number is carried as its partial quotients [0; a_1, a_2, ...].
The value ``alpha`` is the exact finite fraction p_depth/q_depth, so every
quantity derived from k*alpha (for k < q_depth) is computed with exact
integer residues rather than floating point products.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

DEFAULT_PRECISION_BITS = int(os.environ.get("SIEGEL_PRECISION_BITS", "128"))


class DegenerateDenominatorError(ArithmeticError):
    """Raised when some D(k) vanishes, i.e. k*alpha is an integer."""

    def __init__(self, k: int):
        super().__init__(f"degenerate small denominator: D({k}) = 0")
        self.k = k


@dataclass(frozen=True)
class RotationNumber:
    cf_coefficients: tuple[int, ...]

    def __post_init__(self):
        if not self.cf_coefficients:
            raise ValueError("continued fraction needs at least one partial quotient")
        for a in self.cf_coefficients:
            if int(a) != a or a < 1:
                raise ValueError(f"partial quotients must be integers >= 1, got {a!r}")

    @property
    def depth(self) -> int:
        return len(self.cf_coefficients)

    @cached_property
    def convergents(self) -> tuple[tuple[int, int], ...]:
        """(p_n, q_n) for n = 1..depth (the trivial 0/1 at n = 0 is omitted)."""
        p_prev, p = 1, 0
        q_prev, q = 0, 1
        out = []
        for a in self.cf_coefficients:
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
            out.append((p, q))
        return tuple(out)

    def p(self, n: int) -> int:
        return 0 if n == 0 else self.convergents[n - 1][0]

    def q(self, n: int) -> int:
        return 1 if n == 0 else self.convergents[n - 1][1]

    @property
    def alpha(self) -> Fraction:
        p, q = self.convergents[-1]
        return Fraction(p, q)

    def __float__(self) -> float:
        return float(self.alpha)

    @property
    def lam(self) -> complex:
        """lambda = exp(2 pi i alpha)."""
        return complex(np.exp(2j * np.pi * float(self.alpha)))

    def denominators(self, upto: int) -> list[tuple[int, int]]:
        """Distinct (n, q_n) with q_n <= upto, smallest n for repeated values."""
        out = []
        last = None
        for n in range(self.depth + 1):
            qn = self.q(n)
            if qn > upto:
                break
            if qn != last:
                out.append((n, qn))
                last = qn
        return out

    def residues(self, N: int) -> np.ndarray:
        """Signed integer residues of k*p mod q for k = 1..N, reduced to (-q/2, q/2].

        Divided by q these are the signed distances of k*alpha to the
        nearest integer.  Returned as an object array of Python ints.
        """
        P, Q = self.convergents[-1]
        out = np.empty(N, dtype=object)
        r = 0
        half = Q // 2
        for i in range(N):
            r += P
            if r >= Q:
                r -= Q
            out[i] = r - Q if r > half else r
        return out


def from_continued_fraction(coeffs: Sequence[int]) -> RotationNumber:
    return RotationNumber(tuple(int(a) for a in coeffs))


def _periodic(block: Sequence[int], precision_bits: int, depth: int | None) -> RotationNumber:
    if depth is not None:
        if depth < 1:
            raise ValueError("depth must be >= 1")
        return from_continued_fraction([block[i % len(block)] for i in range(depth)])
    target = 1 << precision_bits
    coeffs: list[int] = []
    q_prev, q = 0, 1
    while q < target:
        a = block[len(coeffs) % len(block)]
        coeffs.append(a)
        q_prev, q = q, a * q + q_prev
    return from_continued_fraction(coeffs)


def golden(depth: int | None = None, precision_bits: int = DEFAULT_PRECISION_BITS) -> RotationNumber:
    """(sqrt(5) - 1)/2 truncated at ``depth`` partial quotients.

    Without ``depth`` the expansion is continued until q_depth >= 2**precision_bits.
    """
    return _periodic([1], precision_bits, depth)


def silver(depth: int | None = None, precision_bits: int = DEFAULT_PRECISION_BITS) -> RotationNumber:
    return _periodic([2], precision_bits, depth)


def periodic(block: Sequence[int], depth: int | None = None,
             precision_bits: int = DEFAULT_PRECISION_BITS) -> RotationNumber:
    return _periodic(list(block), precision_bits, depth)


NAMED = {"golden": golden, "silver": silver}


def parse_alpha(spec: str, precision_bits: int = DEFAULT_PRECISION_BITS) -> RotationNumber:
    """Parse a rotation-number spec.

    Accepted forms: a named constant (``golden``, ``silver``), an explicit
    list of partial quotients (``1,2,2,3``) or a periodic block repeated to
    the working precision (``periodic:1,2``).
    """
    s = spec.strip().lower()
    if s in NAMED:
        return NAMED[s](precision_bits=precision_bits)
    if s.startswith("periodic:"):
        block = [int(t) for t in s[len("periodic:"):].split(",") if t.strip()]
        if not block or min(block) < 1:
            raise ValueError(f"bad periodic block in {spec!r}")
        return periodic(block, precision_bits=precision_bits)
    s = s.strip("[]")
    if ";" in s:
        head, s = s.split(";", 1)
        if head.strip() not in ("", "0"):
            raise ValueError("only rotation numbers in (0,1) are supported: integer part must be 0")
    try:
        coeffs = [int(t) for t in s.split(",") if t.strip()]
    except ValueError:
        raise ValueError(f"cannot parse rotation number {spec!r}") from None
    return from_continued_fraction(coeffs)


@dataclass(frozen=True)
class DenominatorCache:
    values: np.ndarray       # D(k), index k-1
    log_values: np.ndarray   # ln D(k)
    dist: np.ndarray         # signed distance of k*alpha to nearest integer

    @property
    def N(self) -> int:
        return len(self.values)

    def D(self, k: int) -> float:
        return float(self.values[k - 1])

    def logD(self, k: int) -> float:
        return float(self.log_values[k - 1])


def small_denominators(rot: RotationNumber, N: int) -> DenominatorCache:
    """D(k) = |1 - lambda^k|^2 = 4 sin^2(pi k alpha) for k = 1..N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    Q = rot.convergents[-1][1]
    res = rot.residues(N)
    zero = np.flatnonzero(res == 0)
    if zero.size:
        raise DegenerateDenominatorError(int(zero[0]) + 1)
    dist = np.array([r / Q for r in res], dtype=float)  # int/int division is correctly rounded
    s = np.abs(np.sin(np.pi * dist))
    values = 4.0 * s * s
    if np.any(values == 0.0):
        raise DegenerateDenominatorError(int(np.flatnonzero(values == 0.0)[0]) + 1)
    log_values = 2.0 * np.log(2.0 * s)
    for a in (values, log_values, dist):
        a.setflags(write=False)
    return DenominatorCache(values, log_values, dist)


def denominator_at(rot: RotationNumber, k: int) -> tuple[float, float]:
    """(D(k), ln D(k)) for a single, possibly huge, k."""
    P, Q = rot.convergents[-1]
    r = (k * P) % Q
    if r == 0:
        raise DegenerateDenominatorError(k)
    r = min(r, Q - r)
    s = math.sin(math.pi * (r / Q))
    if s == 0.0:
        raise DegenerateDenominatorError(k)
    return 4.0 * s * s, 2.0 * math.log(2.0 * s)


def ell(x):
    """ell(x) = ln(2 - 2 cos x), the periodic analogue of ln x^2."""
    return 2.0 * np.log(2.0 * np.abs(np.sin(np.asarray(x) / 2.0)))
