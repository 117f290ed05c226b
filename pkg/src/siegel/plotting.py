"""Matplotlib renderings of the figure data, written next to the CSV exports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

RC = {
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 0.6,
    "savefig.dpi": 150,
    # keep files byte-stable between runs
    "svg.hashsalt": "siegel",
}


def _size(scale: float = 1.0) -> tuple[float, float]:
    width = 6.0 * scale
    return width, width * (np.sqrt(5.0) - 1.0) / 2.0


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, metadata={"Software": None} if path.suffix == ".png" else None)
    plt.close(fig)
    return path


def plot_z_curve(Z: np.ndarray, path, title: str = "") -> Path:
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5, 5))
        z = np.append(Z, Z[:1])
        ax.plot(z.real, z.imag, "k-")
        ax.plot([0], [0], "k+")
        ax.set_aspect("equal")
        ax.set_xlabel("Re Z")
        ax.set_ylabel("Im Z")
        ax.set_title(title)
        return _save(fig, path)


def plot_phase(thetas: np.ndarray, phase: np.ndarray, path, title: str = "") -> Path:
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=_size())
        ax.plot(thetas, phase, "k-")
        ax.set_xlabel(r"$\theta$")
        ax.set_ylabel(r"arg $F(re^{i\theta})$")
        ax.set_title(title)
        return _save(fig, path)


def plot_sequence(k: np.ndarray, y: np.ndarray, path, ylabel: str, title: str = "",
                  logx: bool = False, marks: list[tuple[np.ndarray, np.ndarray, str]] = ()) -> Path:
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=_size())
        ax.plot(k, y, "k-")
        for mk, my, label in marks:
            ax.plot(mk, my, "o", ms=3, label=label)
        if marks:
            ax.legend(frameon=False)
        if logx:
            ax.set_xscale("log")
        ax.set_xlabel("k")
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        return _save(fig, path)


def plot_histogram(edges: np.ndarray, counts: np.ndarray, path, title: str = "") -> Path:
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=_size())
        ax.stairs(counts, edges, color="k")
        ax.set_xlim(edges[0], edges[-1])
        ax.set_xlabel(r"$S\ell(k)/\ln k$")
        ax.set_ylabel("count")
        ax.set_title(title)
        return _save(fig, path)
