"""SVG figures: mean scaled error against m, and per-m box plots.

Line plot: x = iteration m, y = mean of m^2 * relative error, one polyline
per dimension n.  Box plot: one box per m spanning q1..q3 with the median
marked, whiskers at the most extreme points within 1.5 IQR of the box, and
the outlier count written above boxes that have any.  Both figures are
6.4 x 4.0 inches; nothing else about their geometry is fixed.
"""
from __future__ import annotations

from typing import Mapping

from .experiments import AggregateStats


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "lanczoslab"
    import matplotlib.pyplot as plt

    return plt


def line_plot(curves: Mapping[int, AggregateStats], path, title: str = "") -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for n, st in sorted(curves.items()):
        ax.plot(st.m, st.mean, lw=1.2, label=f"n = {n:.0e}" if n >= 1e4 else f"n = {n}")
    ax.set_xlabel("iteration m")
    ax.set_ylabel("m² × mean relative error")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def box_plot(stats: AggregateStats, path, title: str = "", every: int = 1) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    idx = range(0, len(stats.m), every)
    boxes = [{
        "med": stats.median[j], "q1": stats.q1[j], "q3": stats.q3[j],
        "whislo": stats.whisker_low[j], "whishi": stats.whisker_high[j],
        "fliers": [], "label": str(int(stats.m[j])),
    } for j in idx]
    pos = [int(stats.m[j]) for j in idx]
    ax.bxp(boxes, positions=pos, widths=0.6 * every, showfliers=False,
           medianprops={"color": "red"})
    for j, x in zip(idx, pos):
        if stats.outliers[j]:
            ax.annotate(f"+{int(stats.outliers[j])}", (x, stats.whisker_high[j]), fontsize=5, ha="center",
                        va="bottom")
    step = max(1, len(pos) // 10)
    ax.set_xticks(pos[::step], [str(p) for p in pos[::step]])
    ax.set_xlabel("iteration m")
    ax.set_ylabel("m² × relative error")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
