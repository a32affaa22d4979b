"""Figure rendering for the CLI report paths.

Figures are a side output written next to the delimited file; the CSV stays
the primary, byte-deterministic artifact.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .triangular import GrowthRow

__all__ = ["render_growth_figure"]


def render_growth_figure(rows: list[GrowthRow], path) -> None:
    """Truncation-ratio growth plot: operator-norm ratio climbing with n,
    Hilbert-Schmidt ratio pinned at 1/sqrt(2)."""
    sizes = [r.n for r in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogx(sizes, [r.ratio_op for r in rows], "o-", base=2, label=r"operator norm ratio")
    ax.semilogx(sizes, [r.ratio_s2 for r in rows], "s-", base=2, label=r"S2 norm ratio")
    ax.axhline(1.0 / np.sqrt(2.0), color="gray", lw=0.8, ls="--", label=r"$1/\sqrt{2}$")
    ax.set_xlabel("matrix size n")
    ax.set_ylabel("truncated / full norm")
    ax.set_title("Triangular truncation of the Hilbert witness")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
