"""Matplotlib figures: diagram pictures and support heatmaps of localized
matrices.  Figures are written to files; nothing is shown interactively."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .diagram import DiagramWord  # noqa: E402
from .localize import StdMatrix, endpoint  # noqa: E402
from .render import layout  # noqa: E402


def _palette(n: int) -> list:
    cmap = plt.get_cmap("tab10")
    return [cmap(i % 10) for i in range(max(n, 1))]


def plot_diagram(d: DiagramWord, path, title: str | None = None) -> None:
    L = layout(d)
    colors = _palette(d.real.rank)
    height = max(len(d.slices), 1)
    fig, ax = plt.subplots(figsize=(1.0 + 0.7 * L.width, 1.0 + 0.7 * height))
    for c, (x0, y0), (x1, y1) in L.lines:
        ax.plot([x0, x1], [y0, y1], color=colors[c], lw=2.5, solid_capstyle="round")
    for c, (x, y) in L.dots:
        ax.plot([x], [y], "o", color=colors[c], ms=9)
    for x, y in L.vertices:
        ax.plot([x], [y], "o", color="black", ms=3)
    for text, (x, y) in L.labels:
        ax.text(x, y, text, ha="center", va="center", fontsize=8,
                bbox=dict(boxstyle="square", fc="white", ec="black"))
    real = d.real
    handles = [plt.Line2D([], [], color=colors[i], lw=2.5, label=real.colors[i])
               for i in sorted(set(d.bottom) | set(d.top) | {sl.color for sl in d.slices if sl.color >= 0})]
    if handles:
        ax.legend(handles=handles, loc="upper right", fontsize=8, frameon=False)
    ax.set_ylim(-0.2, height + 0.2)
    ax.set_xlim(-L.width / 2 - 0.5, L.width / 2 + 0.5)
    ax.axis("off")
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_support(M: StdMatrix, path, title: str | None = None) -> None:
    """Heatmap of nonzero entries, rows and columns sorted by endpoint length."""
    from .localize import default_system

    W = default_system(M.real)
    rows = sorted(range(1 << len(M.target)),
                  key=lambda f: (W.lengths[endpoint(W, M.target, f)], f))
    cols = sorted(range(1 << len(M.source)),
                  key=lambda e: (W.lengths[endpoint(W, M.source, e)], e))
    ri = {f: i for i, f in enumerate(rows)}
    ci = {e: j for j, e in enumerate(cols)}
    grid = [[0.0] * len(cols) for _ in rows]
    for e, col in M.cols.items():
        for f, v in col.items():
            if not v.is_zero():
                grid[ri[f]][ci[e]] = 1.0 + int(v.ring.wdeg(v.num))
    fig, ax = plt.subplots(figsize=(2 + 0.12 * len(cols), 2 + 0.12 * len(rows)))
    im = ax.imshow(grid, cmap="viridis", interpolation="nearest")
    fig.colorbar(im, ax=ax, label="1 + numerator degree (0 = zero entry)")
    ax.set_xlabel("source subsequence (by endpoint length)")
    ax.set_ylabel("target subsequence (by endpoint length)")
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_gram(entries: list, path, title: str | None = None) -> None:
    """Heatmap of a double-leaves Gram pattern given as a 0/1 (or weight) grid."""
    fig, ax = plt.subplots(figsize=(2 + 0.15 * len(entries[0]), 2 + 0.15 * len(entries)))
    im = ax.imshow(entries, cmap="magma", interpolation="nearest")
    fig.colorbar(im, ax=ax)
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
