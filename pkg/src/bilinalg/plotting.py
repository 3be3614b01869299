"""Figures for the bound table."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_bounds(rows, path) -> None:
    """Bound against dimension ml, one marker series per (q, sym), with the
    lines 2ml - 1 and ml(ml + 1)/2 for reference."""
    fig, ax = plt.subplots(figsize=(6, 4))
    series = {}
    for q, m, l, sym, bound, _ in rows:
        series.setdefault((q, sym), []).append((m * l, bound, l))
    for (q, sym), pts in sorted(series.items()):
        pts.sort()
        x = [p[0] for p in pts]
        y = [p[1] for p in pts]
        ax.scatter(x, y, s=18, marker="o" if sym else "x", label=f"q={q}{' sym' if sym else ''}")
    if series:
        top = max(p[0] for pts in series.values() for p in pts)
        xs = list(range(1, top + 1))
        ax.plot(xs, [2 * x - 1 for x in xs], "k--", lw=0.8, label="2ml-1")
        ax.plot(xs, [x * (x + 1) // 2 for x in xs], "k:", lw=0.8, label="naive")
    ax.set_xlabel("dimension ml")
    ax.set_ylabel("upper bound on bilinear complexity")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
