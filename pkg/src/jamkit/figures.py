"""Static figure rendering for report commands (PNG via the Agg backend)."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_STYLE = {
    "figure.figsize": (6.0, 3.8),
    "figure.dpi": 130,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "axes.titlesize": 10,
}


def _normal_pdf(x):
    return np.exp(-0.5 * x * x) / np.sqrt(2.0 * np.pi)


def render_clt_figures(standardized, running_var, limit_var, ks_statistic,
                       stem, title=""):
    """Histogram of standardized counts against the normal density, plus the
    running per-site variance with its theoretical limit.

    Returns the list of files written (stem + '_hist.png', '_variance.png').
    """
    standardized = np.asarray(standardized, dtype=np.float64)
    running_var = np.asarray(running_var, dtype=np.float64)
    written = []
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.hist(standardized, bins=40, density=True, alpha=0.7,
                label="standardized counts")
        grid = np.linspace(-4, 4, 401)
        ax.plot(grid, _normal_pdf(grid), "k-", lw=1.2, label="standard normal")
        ax.set_xlabel("standardized count")
        ax.set_ylabel("density")
        ax.set_title(f"{title} (KS = {ks_statistic:.4f})".strip())
        ax.legend(frameon=False)
        path = f"{stem}_hist.png"
        fig.savefig(path, bbox_inches="tight")
        plt.close(fig)
        written.append(path)

        fig, ax = plt.subplots()
        idx = np.arange(1, len(running_var) + 1)
        ax.plot(idx, running_var, lw=1.0, label="running Var / n")
        ax.axhline(limit_var, color="k", ls="--", lw=1.0, label="theoretical limit")
        ax.set_xlabel("replicates")
        ax.set_ylabel("Var of count per site")
        ax.set_title(title)
        ax.legend(frameon=False)
        path = f"{stem}_variance.png"
        fig.savefig(path, bbox_inches="tight")
        plt.close(fig)
        written.append(path)
    return written
