"""Run configuration and deterministic CSV / SVG export."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .rotation import DEFAULT_PRECISION_BITS


@dataclass
class RunConfig:
    command: str
    alpha_spec: str = "golden"
    order: int | None = None
    precision_bits: int = DEFAULT_PRECISION_BITS
    radius: float | str | None = None
    samples: int | None = None
    tol: float | None = None
    linearized: bool = False
    threads: int | None = None
    outputs: dict[str, str] = field(default_factory=dict)
    extra: dict[str, object] = field(default_factory=dict)

    def canonical(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_canonical(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def metadata_lines(config: RunConfig, N: int | None = None) -> list[str]:
    return [
        f"# siegel {__version__}",
        f"# config: {config.canonical()}",
        f"# N: {N if N is not None else config.order}",
        f"# precision_bits: {config.precision_bits}",
    ]


def fmt(v) -> str:
    """Shortest round-trip text for floats, plain str otherwise."""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return str(v)


def fmt_from_log(logv: float, digits: int = 15) -> str:
    """Decimal scientific text for exp(logv), valid far outside double range."""
    if logv == -math.inf:
        return "0"
    e10 = logv / math.log(10.0)
    ex = math.floor(e10)
    mant = 10.0 ** (e10 - ex)
    if mant >= 10.0:
        mant /= 10.0
        ex += 1
    return f"{mant:.{digits}f}e{ex:+d}"


def csv_text(header: Sequence[str], rows: Iterable[Sequence], config: RunConfig,
             N: int | None = None) -> str:
    buf = io.StringIO()
    for line in metadata_lines(config, N):
        buf.write(line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence],
              config: RunConfig, N: int | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(csv_text(header, rows, config, N))
    return path


def read_csv(path: str | Path) -> tuple[list[str], list[str], list[list[str]]]:
    """(metadata lines, header, rows) of a file written by write_csv."""
    lines = Path(path).read_text().splitlines()
    meta = [l for l in lines if l.startswith("#")]
    body = [l for l in lines if not l.startswith("#")]
    rows = list(csv.reader(body))
    return meta, rows[0], rows[1:]


def svg_polyline(points: np.ndarray, title: str = "", size: int = 600, margin: int = 40,
                 closed: bool = True) -> str:
    """Minimal SVG of a complex polyline with x/y axes through the origin."""
    z = np.asarray(points, dtype=complex)
    xs, ys = z.real, z.imag
    lo_x, hi_x = min(xs.min(), 0.0), max(xs.max(), 0.0)
    lo_y, hi_y = min(ys.min(), 0.0), max(ys.max(), 0.0)
    span = max(hi_x - lo_x, hi_y - lo_y) or 1.0
    s = (size - 2 * margin) / span

    def px(x, y):
        return margin + (x - lo_x) * s, size - margin - (y - lo_y) * s

    pts = " ".join(f"{a:.3f},{b:.3f}" for a, b in (px(x, y) for x, y in zip(xs, ys)))
    ox, oy = px(0.0, 0.0)
    tag = "polygon" if closed else "polyline"
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<title>{title}</title>",
        f'<line x1="{margin}" y1="{oy:.3f}" x2="{size - margin}" y2="{oy:.3f}" stroke="#999"/>',
        f'<line x1="{ox:.3f}" y1="{margin}" x2="{ox:.3f}" y2="{size - margin}" stroke="#999"/>',
        f'<{tag} points="{pts}" fill="none" stroke="black" stroke-width="0.6"/>',
        "</svg>",
        "",
    ])


def write_svg(path: str | Path, points: np.ndarray, title: str = "", closed: bool = True) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg_polyline(points, title, closed=closed))
    return path
