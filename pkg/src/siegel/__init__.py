"""Numerics for Siegel disks of the map (Z, W) -> (Z W e^-Z, W e^-Z)."""

__version__ = "0.1.0"

from .rotation import (DegenerateDenominatorError, RotationNumber, from_continued_fraction,  # noqa: E402
                       golden, parse_alpha, silver, small_denominators)
from .series import Kind, build_linearized, build_nonlinear, evaluate_m, scale, verify_master  # noqa: E402
from .radius import classify_growth, estimate_radius  # noqa: E402
from .weyl import envelopes, histogram, weyl_sums  # noqa: E402

__all__ = [
    "DegenerateDenominatorError", "RotationNumber", "from_continued_fraction", "golden", "silver",
    "parse_alpha", "small_denominators", "Kind", "build_linearized", "build_nonlinear", "evaluate_m",
    "scale", "verify_master", "classify_growth", "estimate_radius", "envelopes", "histogram",
    "weyl_sums",
]
