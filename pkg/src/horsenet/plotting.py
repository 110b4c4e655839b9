"""Optional matplotlib figures for reports.

PNG output is made reproducible by fixing the backend, the rc settings and
the DPI, and by stripping the metadata matplotlib would otherwise embed.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .polytopes import RatPolytope, project2d  # noqa: E402

colors = ["#08589e", "#d7301f", "#238b45", "#6a51a3", "#fd8d3c", "#525252"]

params = {
    "axes.prop_cycle": matplotlib.cycler(color=colors),
    "axes.labelsize": 9,
    "font.family": "DejaVu Sans",
    "font.size": 8,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.figsize": [3.4, 3.4],
    "lines.linewidth": 0.8,
    "path.simplify": False,
    "svg.hashsalt": "horsenet",
}

DPI = 150


def _save(fig, path) -> None:
    fig.savefig(path, dpi=DPI, metadata={"Software": None})
    plt.close(fig)


def plot_rotation_sets(polytopes: Sequence[RatPolytope], path, axes: tuple[int, int] = (0, 1),
                       labels: Sequence[str] | None = None, target=None) -> None:
    """Filled projections of the polytopes, optionally with a target point."""
    with matplotlib.rc_context(params):
        fig, ax = plt.subplots()
        for k, P in enumerate(polytopes):
            poly = np.array([[float(a), float(b)] for a, b in project2d(P, axes)])
            c = colors[k % len(colors)]
            lab = labels[k] if labels else f"P{k}"
            if len(poly) >= 3:
                ax.fill(poly[:, 0], poly[:, 1], color=c, alpha=0.3, lw=0)
                closed = np.vstack([poly, poly[:1]])
                ax.plot(closed[:, 0], closed[:, 1], color=c, label=lab)
            else:
                ax.plot(poly[:, 0], poly[:, 1], "o-", color=c, ms=3, label=lab)
        if target is not None:
            ax.plot([float(target[axes[0]])], [float(target[axes[1]])], "k+", ms=6)
        ax.set_xlabel(f"coordinate {axes[0]}")
        ax.set_ylabel(f"coordinate {axes[1]}")
        ax.set_aspect("equal", adjustable="datalim")
        if polytopes:
            ax.legend(loc="best", frameon=False)
        fig.tight_layout()
        _save(fig, path)


def plot_prefix_rotations(rot: np.ndarray, path, axes: tuple[int, int] = (0, 1), target=None,
                          net=None) -> None:
    """Trajectory of empirical rotation vectors along an orbit prefix."""
    with matplotlib.rc_context(params):
        fig, ax = plt.subplots()
        ax.plot(rot[:, axes[0]], rot[:, axes[1]], color=colors[0], lw=0.5)
        if net is not None:
            pts = np.array([[float(v[axes[0]]), float(v[axes[1]])] for v in net])
            ax.plot(pts[:, 0], pts[:, 1], "s", color=colors[1], ms=3)
        if target is not None:
            ax.plot([float(target[axes[0]])], [float(target[axes[1]])], "k+", ms=6)
        ax.set_xlabel(f"coordinate {axes[0]}")
        ax.set_ylabel(f"coordinate {axes[1]}")
        fig.tight_layout()
        _save(fig, path)
