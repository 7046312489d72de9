"""Figure rendering for the four plot kinds.

All drawing happens on the Agg backend with a fixed figure size, dpi,
and color table, so rendering is a pure function of the input CSV:
the same file produces a pixel-identical image on every run (given
fixed matplotlib/freetype versions).

The region color table follows the phase-diagram convention: green for
achievable, red for converse, grey for unknown. Heatmap cells are
filled with the pure region color and annotated with the empirical
set-recovery rate, and the optional overlay draws the achievability
boundary interpolated from the margin's zero crossings — taken from
the CSV's margin column, never recomputed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.lines import Line2D  # noqa: E402
from matplotlib.patches import Patch, Rectangle  # noqa: E402

from .schema import (  # noqa: E402
    PlotJob,
    SweepGrid,
    load_chernoff,
    load_expectation,
    load_sweep,
    make_grid,
)

REGION_COLORS = {
    "achievable": "#2e7d32",
    "converse_set": "#c62828",
    "converse_perm": "#c62828",
    "unknown": "#9e9e9e",
}
REGION_DISPLAY = {
    "achievable": "achievable",
    "converse_set": "converse",
    "converse_perm": "converse",
    "unknown": "unknown",
}
_TEXT_ON = {
    "achievable": "white",
    "converse_set": "white",
    "converse_perm": "white",
    "unknown": "black",
}
PASS_COLOR = REGION_COLORS["achievable"]
FAIL_COLOR = REGION_COLORS["converse_set"]
OVERLAY_COLOR = "black"


def region_rgb(label: str) -> tuple[int, int, int]:
    """The exact 8-bit RGB a cell with this label is filled with."""
    h = REGION_COLORS[label].lstrip("#")
    return tuple(int(h[i : i + 2], 16) for i in (0, 2, 4))


@dataclass(frozen=True)
class Crossing:
    """One zero crossing of the achievability margin along p, for a fixed m."""

    m: int
    p_star: float
    p_index: float  # fractional position among the sorted p columns


@dataclass
class RenderReport:
    """What was drawn and where, in image pixel coordinates.

    ``cell_probe_px`` maps each (m, p) grid cell to a pixel inside its
    filled area but away from the annotation text, suitable for reading
    the region color back out of the saved image (index as
    ``image[row, col]``). Only the heatmap populates the cell fields.
    """

    out_path: str
    kind: str
    width_px: int
    height_px: int
    cell_probe_px: dict[tuple[int, float], tuple[int, int]] = field(default_factory=dict)
    cell_labels: dict[tuple[int, float], str] = field(default_factory=dict)
    cell_rgb: dict[tuple[int, float], tuple[int, int, int]] = field(default_factory=dict)
    overlay: tuple[Crossing, ...] = ()
    overlay_px: tuple[tuple[int, int], ...] = ()


def ach_crossings(grid: SweepGrid) -> list[Crossing]:
    """Zero crossings of the ach margin between adjacent p cells, per m row.

    The margin is monotone in p on [0, 0.5] for fixed m, so each row has
    at most one sign change; the crossing is placed by linear
    interpolation between the two cell values. A margin exactly zero on
    a grid point puts the crossing at that point.
    """
    ps = grid.p_values
    out = []
    for m in grid.m_values:
        vals = [grid.cell(m, p).ach for p in ps]
        for j in range(len(ps) - 1):
            a, b = vals[j], vals[j + 1]
            if a == 0.0:
                out.append(Crossing(m, ps[j], float(j)))
                break
            if (a < 0.0) != (b < 0.0):
                t = a / (a - b)
                out.append(Crossing(m, ps[j] + t * (ps[j + 1] - ps[j]), j + t))
                break
        else:
            if vals and vals[-1] == 0.0:
                out.append(Crossing(m, ps[-1], float(len(ps) - 1)))
    return out


def _px(fig, ax, x: float, y: float) -> tuple[int, int]:
    """Data coordinates -> (col, row) index into the saved RGBA array."""
    dx, dy = ax.transData.transform((x, y))
    _, height = fig.canvas.get_width_height()
    return int(round(dx)), int(round(height - dy))


def render(job: PlotJob) -> RenderReport:
    """Draw the figure for ``job`` and write it to ``job.out_path``."""
    if job.kind == "region-heatmap":
        return _render_heatmap(job)
    if job.kind == "rate-vs-p":
        return _render_rates(job)
    if job.kind == "expectation-check":
        return _render_expectation(job)
    return _render_chernoff(job)


def _finish(fig, job: PlotJob, report: RenderReport) -> RenderReport:
    fig.savefig(job.out_path)
    width, height = fig.canvas.get_width_height()
    report.width_px = width
    report.height_px = height
    plt.close(fig)
    return report


def _render_heatmap(job: PlotJob) -> RenderReport:
    grid = make_grid(load_sweep(job.csv_path))
    if job.x_axis == "p":
        cols: tuple = grid.p_values
        rows: tuple = grid.m_values
        xlabel, ylabel = "p", "m"
    else:
        cols, rows = grid.m_values, grid.p_values
        xlabel, ylabel = "m", "p"

    fig = plt.figure(figsize=(max(6.0, 1.1 * len(cols) + 1.8), max(4.0, 0.75 * len(rows) + 1.4)), dpi=100)
    ax = fig.add_subplot(111)
    report = RenderReport(out_path=job.out_path, kind=job.kind, width_px=0, height_px=0)

    present = []
    for i, rv in enumerate(rows):
        for j, cv in enumerate(cols):
            m, p = (rv, cv) if job.x_axis == "p" else (cv, rv)
            cell = grid.cell(m, p)
            label = cell.region_set
            ax.add_patch(
                Rectangle((j, i), 1.0, 1.0, facecolor=REGION_COLORS[label], edgecolor="white", linewidth=0.8)
            )
            ax.text(
                j + 0.5, i + 0.5, f"{cell.set_rate:.2f}",
                ha="center", va="center", fontsize=9, color=_TEXT_ON[label],
            )
            if label not in present:
                present.append(label)
            report.cell_labels[(m, p)] = label
            report.cell_rgb[(m, p)] = region_rgb(label)

    ax.set_xlim(0, len(cols))
    ax.set_ylim(0, len(rows))
    ax.set_xticks([j + 0.5 for j in range(len(cols))])
    ax.set_xticklabels([f"{c:g}" for c in cols])
    ax.set_yticks([i + 0.5 for i in range(len(rows))])
    ax.set_yticklabels([f"{r:g}" for r in rows])
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(f"set-recovery phase diagram, n={grid.n} (cell = empirical rate)")
    ax.tick_params(length=0)

    handles = [
        Patch(facecolor=REGION_COLORS[lab], label=REGION_DISPLAY[lab])
        for lab in ("achievable", "converse_set", "unknown")
        if lab in present or (lab == "converse_set" and "converse_perm" in present)
    ]
    crossings: list[Crossing] = []
    if job.overlay:
        crossings = ach_crossings(grid)
        if crossings:
            m_index = {m: i for i, m in enumerate(grid.m_values)}
            pts = []
            for c in crossings:
                if job.x_axis == "p":
                    pts.append((c.p_index + 0.5, m_index[c.m] + 0.5))
                else:
                    pts.append((m_index[c.m] + 0.5, c.p_index + 0.5))
            ax.plot(
                [q[0] for q in pts], [q[1] for q in pts],
                color=OVERLAY_COLOR, linewidth=2.5, solid_capstyle="round", zorder=5,
            )
            handles.append(Line2D([], [], color=OVERLAY_COLOR, linewidth=2.5, label="ach margin = 0"))
    if handles:
        ax.legend(handles=handles, loc="upper left", bbox_to_anchor=(1.01, 1.0), frameon=False)
    fig.tight_layout()
    fig.canvas.draw()

    # probe points sit in the upper-left quadrant of each cell, clear of
    # the centered rate annotation and the overlay polyline vertices
    for i, rv in enumerate(rows):
        for j, cv in enumerate(cols):
            m, p = (rv, cv) if job.x_axis == "p" else (cv, rv)
            report.cell_probe_px[(m, p)] = _px(fig, ax, j + 0.25, i + 0.78)
    if job.overlay and crossings:
        report.overlay = tuple(crossings)
        px = []
        m_index = {m: i for i, m in enumerate(grid.m_values)}
        for c in crossings:
            if job.x_axis == "p":
                px.append(_px(fig, ax, c.p_index + 0.5, m_index[c.m] + 0.5))
            else:
                px.append(_px(fig, ax, m_index[c.m] + 0.5, c.p_index + 0.5))
        report.overlay_px = tuple(px)
    return _finish(fig, job, report)


def _render_rates(job: PlotJob) -> RenderReport:
    grid = make_grid(load_sweep(job.csv_path))
    groups: tuple = grid.m_values if job.x_axis == "p" else grid.p_values
    xs: tuple = grid.p_values if job.x_axis == "p" else grid.m_values

    fig = plt.figure(figsize=(7.2, 4.8), dpi=100)
    ax = fig.add_subplot(111)
    cycle = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    crossings = ach_crossings(grid) if job.overlay else []
    cross_by_m = {c.m: c for c in crossings}

    for k, g in enumerate(groups):
        color = cycle[k % len(cycle)]
        if job.x_axis == "p":
            cells = [grid.cell(g, x) for x in xs]
            label = f"m={g}"
        else:
            cells = [grid.cell(x, g) for x in xs]
            label = f"p={g:g}"
        ax.plot(xs, [c.set_rate for c in cells], marker="o", markersize=4, color=color, label=label)
        ax.plot(xs, [c.perm_rate for c in cells], linestyle="--", linewidth=1.0, color=color, alpha=0.7)
        if job.x_axis == "p" and g in cross_by_m:
            ax.axvline(cross_by_m[g].p_star, color=color, linestyle=":", linewidth=1.4)

    ax.axhline(0.5, color="grey", linestyle=":", linewidth=1.0)
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel(job.x_axis)
    ax.set_ylabel("recovery rate")
    ax.set_title(f"recovery rate vs {job.x_axis}, n={grid.n}")
    handles, labels = ax.get_legend_handles_labels()
    handles.append(Line2D([], [], color="grey", linestyle="--", linewidth=1.0, label="perm rate"))
    if job.overlay and job.x_axis == "p" and cross_by_m:
        handles.append(Line2D([], [], color="grey", linestyle=":", linewidth=1.4, label="ach margin = 0"))
    ax.legend(handles=handles, fontsize=8, loc="upper left", bbox_to_anchor=(1.01, 1.0), frameon=False)
    fig.tight_layout()
    fig.canvas.draw()
    report = RenderReport(
        out_path=job.out_path, kind=job.kind, width_px=0, height_px=0,
        overlay=tuple(crossings),
    )
    return _finish(fig, job, report)


def _render_expectation(job: PlotJob) -> RenderReport:
    rows = load_expectation(job.csv_path)
    fig = plt.figure(figsize=(max(6.0, 0.9 * len(rows) + 2.0), 4.6), dpi=100)
    ax = fig.add_subplot(111)
    for i, r in enumerate(rows):
        color = PASS_COLOR if r.passed else FAIL_COLOR
        ax.errorbar([i], [r.empirical], yerr=[3.0 * r.std_error], fmt="o", markersize=5,
                    color=color, ecolor=color, capsize=4, zorder=3)
    ax.scatter(range(len(rows)), [r.expected for r in rows], marker="_", s=420,
               color="black", zorder=2)
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels([f"{r.pattern}\np={r.p:g}" for r in rows], fontsize=8)
    ax.set_ylabel("induced-copy count (mean)")
    ax.set_title(f"expected copy-count check, n={rows[0].n}")
    handles = [
        Line2D([], [], marker="o", linestyle="", color=PASS_COLOR, label="empirical ± 3 SE (passed)"),
        Line2D([], [], marker="_", linestyle="", markersize=14, color="black", label="closed form"),
    ]
    if any(not r.passed for r in rows):
        handles.insert(1, Line2D([], [], marker="o", linestyle="", color=FAIL_COLOR, label="empirical ± 3 SE (failed)"))
    ax.legend(handles=handles, fontsize=8, frameon=False)
    fig.tight_layout()
    fig.canvas.draw()
    report = RenderReport(out_path=job.out_path, kind=job.kind, width_px=0, height_px=0)
    return _finish(fig, job, report)


def _render_chernoff(job: PlotJob) -> RenderReport:
    rows = load_chernoff(job.csv_path)
    fig = plt.figure(figsize=(max(6.0, 1.2 * len(rows) + 2.0), 4.6), dpi=100)
    ax = fig.add_subplot(111)
    for i, r in enumerate(rows):
        color = PASS_COLOR if r.passed else FAIL_COLOR
        ax.scatter([i], [r.rate], color=color, zorder=3)
    ax.scatter(range(len(rows)), [r.bound for r in rows], marker="_", s=420, color="black", zorder=2)
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels([f"m={r.m} p={r.p:g}\neps={r.eps:.3g}" for r in rows], fontsize=8)
    ax.set_ylim(bottom=-0.02)
    ax.set_ylabel("probability")
    ax.set_title("edge-count tail bound check")
    handles = [
        Line2D([], [], marker="o", linestyle="", color=PASS_COLOR, label="empirical atypical rate"),
        Line2D([], [], marker="_", linestyle="", markersize=14, color="black", label="bound"),
    ]
    if any(not r.passed for r in rows):
        handles.insert(1, Line2D([], [], marker="o", linestyle="", color=FAIL_COLOR, label="rate (failed)"))
    ax.legend(handles=handles, fontsize=8, frameon=False)
    fig.tight_layout()
    fig.canvas.draw()
    report = RenderReport(out_path=job.out_path, kind=job.kind, width_px=0, height_px=0)
    return _finish(fig, job, report)
