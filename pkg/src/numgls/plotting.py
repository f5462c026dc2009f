"""SVG figures for the CLI. Needs matplotlib (``pip install artifact[plot]``)."""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # fixed ids and no timestamp so reruns give identical files
    matplotlib.rcParams["svg.hashsalt"] = "numgls"
    return plt


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    return path


def variance_curve_svg(path, results, config) -> Path:
    plt = _pyplot()
    ok = [r for r in results if r.ok]
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot([r.t for r in ok], [config.sigma2 * r.statistic_variance for r in ok], "k.-", lw=0.8, ms=3)
    miss = [r for r in ok if not r.bracketed]
    if miss:
        ax.plot([r.t for r in miss], [config.sigma2 * r.statistic_variance for r in miss], "rx", label="no root")
        ax.legend()
    ax.set_xlabel("correlation parameter t")
    ax.set_ylabel("estimator variance" + (" / sigma^2" if config.sigma2 == 1 else ""))
    ax.set_title(f"n = {config.n}")
    fig.tight_layout()
    try:
        return _save(fig, Path(path))
    finally:
        plt.close(fig)


def compare_svg(path, results, classic, series, config) -> Path:
    plt = _pyplot()
    ok = [r for r in results if r.ok]
    fig, ax = plt.subplots(figsize=(10, 4))
    idx = np.arange(1, len(series) + 1)
    ax.plot(idx, series.values, color="0.75", lw=0.8, label="series")
    ax.axhline(classic.estimate, color="0.4", lw=1.5, label="classic GLS")
    ax.plot([r.j_star for r in ok], [r.estimate for r in ok], "k.", ms=3, label="numerical GLS at j*")
    ax.axvline(config.n, color="k", ls="--", lw=0.8)
    ax.set_xlabel("index j")
    ax.set_ylabel("value")
    ax.legend(loc="best", fontsize="small")
    fig.tight_layout()
    try:
        return _save(fig, Path(path))
    finally:
        plt.close(fig)
