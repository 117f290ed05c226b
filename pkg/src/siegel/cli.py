"""Command-line entry point.

Exit status: 0 on success, 2 when a computation or check fails validation,
1 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (cocycle_check, fit_log_growth, mather_relation_check, smoothness_estimate)
from .boundary import (NEAR_BOUNDARY_FRACTION, f_phase_curve, gamma_curve, self_intersection_test,
                       winding_number)
from .dynamics import iterate_T, orbit_statistics
from .io import RunConfig, csv_text, fmt_from_log, write_csv, write_svg
from .radius import Growth, classify_growth, estimate_radius
from .rotation import DEFAULT_PRECISION_BITS, DegenerateDenominatorError, denominator_at, parse_alpha
from .series import (DEFAULT_ORDER, Kind, TailBoundError, build_linearized, build_nonlinear,
                     master_residual, scale)
from .weyl import envelopes, histogram, weyl_sums

log = logging.getLogger("siegel")

FIGURES = ("fig1", "fig2", "logG", "SlD", "distribution", "fitting-errors")
WEYL_DEFAULT_INDEX = 27     # q_27 for the stand-alone Weyl statistics
JOINT_DEFAULT_INDEX = 20    # q_20 when Weyl sums feed the series analyses

# tolerances of the identity suite
MATHER_POINTS = (0.1, 0.2, 0.25)
MATHER_TOL = 1e-12
COCYCLE_TOL = 1e-8
MASTER_TOL = 1e-12
ORBIT_TOL = 1e-10


class UsageError(Exception):
    pass


class ValidationFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _common(p: argparse.ArgumentParser, order: bool = True) -> None:
    p.add_argument("--alpha", default="golden",
                   help="golden, silver, periodic:a,b,... or explicit partial quotients a1,a2,...")
    p.add_argument("--precision-bits", type=int, default=DEFAULT_PRECISION_BITS)
    p.add_argument("--threads", type=int, default=None, help="parallelism cap (computations here are serial)")
    if order:
        p.add_argument("-N", "--order", type=int, default=None, dest="order")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="siegel", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"siegel {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("rotation", help="convergents and D(q_n) as CSV")
    _common(p, order=False)
    p.add_argument("--rows", type=int, default=None, help="number of convergents to print")
    p.add_argument("--out", default=None)

    p = sub.add_parser("series", help="coefficients m_k and ln F_k")
    _common(p)
    p.add_argument("--linearized", action="store_true")
    p.add_argument("--out", default=None)

    p = sub.add_parser("radius", help="bisection bracket for the radius of convergence (JSON)")
    _common(p)
    p.add_argument("--tol", type=float, default=0.005)
    p.add_argument("--linearized", action="store_true")

    p = sub.add_parser("weyl", help="Weyl sums: distribution histogram and envelopes")
    _common(p)
    p.add_argument("--hist", action="store_true")
    p.add_argument("--envelopes", action="store_true")
    p.add_argument("--out", default=None, help="histogram CSV (or envelopes CSV when only --envelopes)")
    p.add_argument("--env-out", default=None, help="envelopes CSV when both --hist and --envelopes")

    p = sub.add_parser("fit", help="least-squares fit of ln G(k) on S(k), k, 1, ln k")
    _common(p)
    p.add_argument("-r", "--radius", default="auto")
    p.add_argument("--k-min", type=int, default=32)
    p.add_argument("--out", default=None)

    p = sub.add_parser("boundary", help="sample the embedding on |x| = r")
    _common(p)
    p.add_argument("-r", "--radius", default="auto")
    p.add_argument("--samples", type=int, default=8192)
    p.add_argument("--out", default=None)
    p.add_argument("--svg", default=None)

    p = sub.add_parser("dynamics", help="orbit of T(z, w) = (c z, w (1 - z))")
    _common(p, order=False)
    p.add_argument("--z0", default="c", help="'c' or re,im (use --z0=-1,0 for negative values)")
    p.add_argument("--w0", default="1,0")
    p.add_argument("-n", "--steps", type=int, default=10_000, dest="steps")
    p.add_argument("--out", default=None)

    p = sub.add_parser("check-identities", help="cocycle, Mather, master-equation and orbit identities")
    _common(p, order=False)

    p = sub.add_parser("reproduce", help="CSV, SVG and PNG data behind each figure")
    _common(p)
    p.add_argument("figure", choices=FIGURES + ("all",))
    p.add_argument("--outdir", default=".")
    p.add_argument("--no-png", action="store_true")
    return parser


def _config(args, **extra) -> RunConfig:
    outputs = {k: getattr(args, k) for k in ("out", "env_out", "svg", "outdir") if getattr(args, k, None)}
    return RunConfig(
        command=args.command,
        alpha_spec=args.alpha,
        order=getattr(args, "order", None),
        precision_bits=args.precision_bits,
        radius=getattr(args, "radius", None),
        samples=getattr(args, "samples", None),
        tol=getattr(args, "tol", None),
        linearized=bool(getattr(args, "linearized", False)),
        threads=args.threads,
        outputs=outputs,
        extra=extra,
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _complex(s: str, c: complex) -> complex:
    if s.strip().lower() == "c":
        return c
    parts = [float(t) for t in s.split(",")]
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise UsageError(f"expected re,im but got {s!r}")
    return complex(parts[0], parts[1])


def _radius_context(rot, N):
    """Nonlinear table plus the bisection bracket used for r = auto."""
    table = build_nonlinear(rot, N)
    bracket = estimate_radius(rot, N, 0.005, Kind.NONLINEAR, table=table)
    if bracket.N_used != table.N:
        table = build_nonlinear(rot, bracket.N_used)
    return table, bracket


# -- subcommands -------------------------------------------------------------

def cmd_rotation(args) -> int:
    rot = parse_alpha(args.alpha, args.precision_bits)
    cfg = _config(args)
    rows = []
    last = rot.depth - 1 if args.rows is None else min(args.rows, rot.depth - 1)
    for n in range(1, last + 1):
        D, lD = denominator_at(rot, rot.q(n))
        rows.append((n, rot.p(n), rot.q(n), D, lD))
    _emit(csv_text(["n", "p", "q", "D_q", "log_D_q"], rows, cfg, rot.depth), args.out)
    return 0


def cmd_series(args) -> int:
    rot = parse_alpha(args.alpha, args.precision_bits)
    N = args.order or DEFAULT_ORDER
    table = build_linearized(rot, N) if args.linearized else build_nonlinear(rot, N)
    cfg = _config(args)
    rows = ((k, fmt_from_log(table.log_m[k]), float(table.log_F[k])) for k in range(N + 1))
    _emit(csv_text(["k", "m_k", "log_F_k"], rows, cfg, N), args.out)
    return 0


def cmd_radius(args) -> int:
    rot = parse_alpha(args.alpha, args.precision_bits)
    N = args.order or DEFAULT_ORDER
    kind = Kind.LINEARIZED if args.linearized else Kind.NONLINEAR
    b = estimate_radius(rot, N, args.tol, kind)
    print(json.dumps(b.as_dict(), sort_keys=True))
    return 0


def cmd_weyl(args) -> int:
    rot = parse_alpha(args.alpha, args.precision_bits)
    K = args.order or rot.q(WEYL_DEFAULT_INDEX)
    ws = weyl_sums(rot, K)
    cfg = _config(args)
    summary = {"K": K}
    if args.hist or not args.envelopes:
        h = histogram(ws, K)
        rows = ((float(h.edges[i]), float(h.edges[i + 1]), int(h.counts[i])) for i in range(len(h.counts)))
        _emit(csv_text(["bin_lo", "bin_hi", "count"], rows, cfg, K), args.out)
        summary.update(h.symmetry(), underflow=h.underflow, overflow=h.overflow, mode=h.mode,
                       max_ratio=float(h.ratio.max()), argmax_k=h.argmax_k())
    if args.envelopes:
        env = envelopes(ws, rot)
        upper = {j: s for j, _, s in env.upper}
        rows = ((j, q, s, upper.get(j, "")) for j, q, s in env.lower)
        target = args.env_out if args.hist else args.out
        _emit(csv_text(["j", "q", "S_at_q", "S_at_qm1"], rows, cfg, K), target)
        summary["upper_slope_vs_logn"] = env.upper_slope_vs_logn
    if args.out or args.env_out:
        print(json.dumps(summary, sort_keys=True))
    return 0


def _fit_data(rot, N, radius):
    table, bracket = _radius_context(rot, N)
    r = bracket.lo if radius in (None, "auto") else float(radius)
    seq = scale(table, r)
    ws = weyl_sums(rot, max(N, rot.q(JOINT_DEFAULT_INDEX)))
    return table, bracket, r, seq, ws


def cmd_fit(args) -> int:
    rot = parse_alpha(args.alpha, args.precision_bits)
    N = args.order or DEFAULT_ORDER
    table, bracket, r, seq, ws = _fit_data(rot, N, args.radius)
    fit = fit_log_growth(seq, ws, args.k_min)
    cfg = _config(args, r_used=r)
    rows = zip(fit.k, fit.log_G, fit.S, fit.prediction, fit.residuals)
    if args.out:
        write_csv(args.out, ["k", "logG", "S", "prediction", "residual"], rows, cfg, N)
    result = {"r": r, "a": fit.a, "b": fit.b, "c": fit.c, "d": fit.d, "rms_residual": fit.rms_residual,
              "verdict": fit.verdict.label.value if fit.verdict else None}
    if fit.verdict is None or fit.verdict.label is not Growth.ABOVE:
        est = smoothness_estimate(fit, histogram(ws, rot.q(JOINT_DEFAULT_INDEX)))
        result.update(growth_exponent=est.growth_exponent, smoothness_order=est.smoothness_order,
                      smoothness_uncertainty=est.uncertainty, heuristic=True)
    print(json.dumps(result, sort_keys=True))
    return 0


def _boundary_radius(args, rot, N):
    table, bracket = _radius_context(rot, N)
    if args.radius in (None, "auto"):
        r = NEAR_BOUNDARY_FRACTION * bracket.mid
    else:
        r = float(args.radius)
    return table, bracket, r


def _curve_rows(c):
    return zip(c.thetas, c.Z_vals.real, c.Z_vals.imag, c.W_vals.real, c.W_vals.imag,
               c.M_vals.real, c.M_vals.imag)


CURVE_HEADER = ["theta", "ReZ", "ImZ", "ReW", "ImW", "ReM", "ImM"]


def cmd_boundary(args) -> int:
    rot = parse_alpha(args.alpha, args.precision_bits)
    N = args.order or DEFAULT_ORDER
    table, bracket, r = _boundary_radius(args, rot, N)
    c = gamma_curve(table, r, args.samples, r_ref=bracket.hi)
    cfg = _config(args, r_used=r, bracket=[bracket.lo, bracket.hi])
    if args.out:
        write_csv(args.out, CURVE_HEADER, _curve_rows(c), cfg, table.N)
    else:
        sys.stdout.write(csv_text(CURVE_HEADER, _curve_rows(c), cfg, table.N))
    if args.svg:
        write_svg(args.svg, c.Z_vals, title=f"Z(r e^(i theta)), r = {r:.6f}")
    crossings = self_intersection_test(c, "Z")
    print(json.dumps({"r": r, "winding": winding_number(c.Z_vals), "self_intersections": len(crossings)}),
          file=sys.stderr)
    return 0


def cmd_dynamics(args) -> int:
    rot = parse_alpha(args.alpha, args.precision_bits)
    z0 = _complex(args.z0, rot.lam)
    w0 = _complex(args.w0, rot.lam)
    orbit = iterate_T(z0, w0, args.steps, rot)
    cfg = _config(args, z0=[z0.real, z0.imag], w0=[w0.real, w0.imag], steps=args.steps)
    rows = zip(range(orbit.n + 1), orbit.log_abs_w, orbit.frac_k_alpha)
    _emit(csv_text(["k", "log_abs_w", "frac_k_alpha"], rows, cfg, orbit.n), args.out)
    if args.out:
        s = orbit_statistics(orbit, rot)
        print(json.dumps({"max": s.max, "min": s.min, "argmax": s.argmax, "argmin": s.argmin}))
    return 0


def identity_suite(rot, N: int = 2048) -> list[tuple[str, float, float]]:
    """(name, value, tolerance) for every exact identity checked by check-identities."""
    out = []
    T = build_nonlinear(rot, N)
    r_ref = T.radius_hint()
    for x in MATHER_POINTS:
        out.append((f"mather x={x}", mather_relation_check(T, x, r_ref), MATHER_TOL))
    L = build_linearized(rot, N)
    out.append(("cocycle |x|=0.5 n=50", cocycle_check(L, 0.5, 50), COCYCLE_TOL))
    out.append(("master k<=512", max(master_residual(T, 0.3, k) for k in range(1, 513)), MASTER_TOL))
    n = 10_000
    orbit = iterate_T(rot.lam, 1.0, n, rot)
    ws = weyl_sums(rot, n)
    out.append(("orbit n<=1e4", float(np.max(np.abs(orbit.log_abs_w - ws.S / 2))), ORBIT_TOL))
    return out


def cmd_check_identities(args) -> int:
    rot = parse_alpha(args.alpha, args.precision_bits)
    ok = True
    for name, value, tol in identity_suite(rot):
        passed = value < tol
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'} {name}: {value:.3e} < {tol:.0e}")
    if not ok:
        raise ValidationFailure("identity suite failed")
    return 0


def reproduce(fig: str, rot, N: int, outdir: Path, cfg: RunConfig, png: bool = True) -> list[Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    base = outdir / fig
    if fig in ("fig1", "fig2"):
        table, bracket = _radius_context(rot, N)
        r = NEAR_BOUNDARY_FRACTION * bracket.mid
        cfg.extra.update(r_used=r)
        if fig == "fig1":
            c = gamma_curve(table, r, 8192, r_ref=bracket.hi)
            written.append(write_csv(base.with_suffix(".csv"), CURVE_HEADER, _curve_rows(c), cfg, table.N))
            written.append(write_svg(base.with_suffix(".svg"), c.Z_vals, f"Z image, r = {r:.6f}"))
            if png:
                from .plotting import plot_z_curve
                written.append(plot_z_curve(c.Z_vals, base.with_suffix(".png"), f"r = {r:.5f}"))
        else:
            ph = f_phase_curve(table, r, 8192, r_ref=bracket.hi)
            written.append(write_csv(base.with_suffix(".csv"), ["theta", "phase"],
                                     zip(ph.thetas, ph.phase), cfg, table.N))
            written.append(write_svg(base.with_suffix(".svg"), ph.thetas + 1j * ph.phase,
                                     "phase of F", closed=False))
            if png:
                from .plotting import plot_phase
                written.append(plot_phase(ph.thetas, ph.phase, base.with_suffix(".png"), f"r = {r:.5f}"))
    elif fig == "logG":
        table, bracket = _radius_context(rot, N)
        r = 1.01 * bracket.hi
        cfg.extra.update(r_used=r)
        seq = scale(table, r)
        k = np.arange(seq.N + 1)
        written.append(write_csv(base.with_suffix(".csv"), ["k", "logG"], zip(k, seq.log_G), cfg, N))
        if png:
            from .plotting import plot_sequence
            written.append(plot_sequence(k, seq.log_G, base.with_suffix(".png"), r"$\ln G(k)$",
                                         f"r = {r:.5f} ({classify_growth(seq).label.value})"))
    elif fig == "SlD":
        K = max(N, rot.q(JOINT_DEFAULT_INDEX))
        ws = weyl_sums(rot, K)
        k = np.arange(K + 1)
        written.append(write_csv(base.with_suffix(".csv"), ["k", "S"], zip(k, ws.S), cfg, K))
        if png:
            from .plotting import plot_sequence
            env = envelopes(ws, rot)
            lo = np.array([(q, s) for _, q, s in env.lower]).T
            up = np.array([(n, s) for _, n, s in env.upper]).T
            written.append(plot_sequence(k[1:], ws.S[1:], base.with_suffix(".png"), r"$S\ell(k)$",
                                         logx=True, marks=[(lo[0], lo[1], "$q_n$"), (up[0], up[1], "$q_n-1$")]))
    elif fig == "distribution":
        K = rot.q(WEYL_DEFAULT_INDEX)
        h = histogram(weyl_sums(rot, K), K)
        rows = ((float(h.edges[i]), float(h.edges[i + 1]), int(h.counts[i])) for i in range(len(h.counts)))
        written.append(write_csv(base.with_suffix(".csv"), ["bin_lo", "bin_hi", "count"], rows, cfg, K))
        if png:
            from .plotting import plot_histogram
            written.append(plot_histogram(h.edges, h.counts, base.with_suffix(".png"), f"k = 2..{K}"))
    elif fig == "fitting-errors":
        table, bracket, r, seq, ws = _fit_data(rot, N, "auto")
        fit = fit_log_growth(seq, ws)
        cfg.extra.update(r_used=r, coefficients=list(fit.coefficients))
        rows = zip(fit.k, fit.log_G, fit.S, fit.prediction, fit.residuals)
        written.append(write_csv(base.with_suffix(".csv"), ["k", "logG", "S", "prediction", "residual"],
                                 rows, cfg, N))
        if png:
            from .plotting import plot_sequence
            written.append(plot_sequence(fit.k, fit.residuals, base.with_suffix(".png"), "residual",
                                         "fit residual"))
    else:
        raise UsageError(f"unknown figure {fig!r}")
    return written


def cmd_reproduce(args) -> int:
    rot = parse_alpha(args.alpha, args.precision_bits)
    N = args.order or DEFAULT_ORDER
    figs = FIGURES if args.figure == "all" else (args.figure,)
    for fig in figs:
        cfg = _config(args, figure=fig)
        for path in reproduce(fig, rot, N, Path(args.outdir), cfg, png=not args.no_png):
            print(path)
    return 0


COMMANDS = {
    "rotation": cmd_rotation,
    "series": cmd_series,
    "radius": cmd_radius,
    "weyl": cmd_weyl,
    "fit": cmd_fit,
    "boundary": cmd_boundary,
    "dynamics": cmd_dynamics,
    "check-identities": cmd_check_identities,
    "reproduce": cmd_reproduce,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(e, file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return 1
    except ValidationFailure as e:
        print(f"validation failed: {e}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, DegenerateDenominatorError, TailBoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
