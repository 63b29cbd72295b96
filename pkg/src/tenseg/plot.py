"""Matplotlib figures of a tensegrity with its certificate, for analysis reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .model import Tensegrity, edge_rows  # noqa: E402


def plot_tensegrity(t: Tensegrity, path, weights=None, motion=None, title: str | None = None):
    """Write a figure to ``path`` (format from the extension)."""
    P = np.array(t.positions, dtype=float).reshape(-1, t.dim)
    P2 = P[:, :2] if t.dim >= 2 else np.c_[P, np.zeros(len(P))]
    fig, ax = plt.subplots(figsize=(6, 6))
    ix = t.index
    for chain in t.chains:
        Q = P2[[ix(v) for v in chain]]
        ax.plot(Q[:, 0], Q[:, 1], color="#9aa5b1", lw=0.8, ls="--", zorder=1)
    for a, b in t.struts:
        Q = P2[[ix(a), ix(b)]]
        ax.plot(Q[:, 0], Q[:, 1], color="#222", lw=3.5, solid_capstyle="round", zorder=2)
    for a, b in t.cables:
        Q = P2[[ix(a), ix(b)]]
        ax.plot(Q[:, 0], Q[:, 1], color="#1f5fa8", lw=1.0, zorder=2)
    for a, b in t.bars:
        Q = P2[[ix(a), ix(b)]]
        ax.plot(Q[:, 0], Q[:, 1], color="#222", lw=4.5, zorder=2)
        ax.plot(Q[:, 0], Q[:, 1], color="white", lw=1.8, zorder=3)
    if weights is not None:
        labels: dict = {}
        for k, r in enumerate(edge_rows(t)):
            labels.setdefault(r.endpoints, []).append(f"{weights[k]:.3g}")
        for (i, j), text in labels.items():
            m = (P2[i] + P2[j]) / 2
            ax.annotate("/".join(text), m, fontsize=7, color="#b35900", ha="center",
                        zorder=5)
    if motion is not None:
        V = np.asarray(motion, dtype=float).reshape(-1, t.dim)[:, :2]
        ax.quiver(P2[:, 0], P2[:, 1], V[:, 0], V[:, 1], color="#c0392b", angles="xy",
                  zorder=4)
    ax.scatter(P2[:, 0], P2[:, 1], s=22, facecolor="white", edgecolor="#222", zorder=6)
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title)
    fig.savefig(path, bbox_inches="tight", dpi=120)
    plt.close(fig)
