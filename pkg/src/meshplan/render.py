"""Figure rendering and export formatting for plans.

All output is deterministic: SVG ids are salted with a fixed string, no
timestamps are embedded, and every element order follows the canonical
(sorted) plan serialization.
"""

from __future__ import annotations

import json
from io import StringIO

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.lines import Line2D
from matplotlib.patches import Rectangle

from .cost import CostEstimate
from .scenario import Scenario

HASH_SALT = "meshplan"

CHANNEL_COLORS = {1: "#e41a1c", 6: "#4daf4a", 11: "#377eb8"}
EXTRA_COLORS = ("#984ea3", "#ff7f00", "#a65628", "#f781bf", "#999999")

KIND_MARKERS = {"indoor": "s", "outdoor": "^"}
INTEREST_COLOR = "#fdbf6f"
BLOCKED_COLOR = "#d9d9d9"
PLAIN_COLOR = "#f7f7f2"


def channel_color(channel: int | None) -> str:
    if channel is None:
        return "#777777"
    if channel in CHANNEL_COLORS:
        return CHANNEL_COLORS[channel]
    return EXTRA_COLORS[channel % len(EXTRA_COLORS)]


def _save(fig, path: str) -> None:
    with plt.rc_context({"svg.hashsalt": HASH_SALT}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def map_figure(plan_doc: dict, s: Scenario | None = None):
    """Region map: cells shaded by interest weight, nodes and channel-colored
    links from the plan document."""
    sites = plan_doc["selected"]
    links = plan_doc["links"]
    positions = {rec["id"]: (rec["x_m"], rec["y_m"]) for rec in sites}

    if s is not None:
        width = s.grid.cols * s.grid.cell_size
        height = s.grid.rows * s.grid.cell_size
    else:
        xs = [x for x, _ in positions.values()] or [0.0]
        ys = [y for _, y in positions.values()] or [0.0]
        margin = max(max(xs) - min(xs), max(ys) - min(ys), 1.0) * 0.1 + 1.0
        width = max(xs) + margin
        height = max(ys) + margin

    scale = 7.5 / max(width, height)
    fig, ax = plt.subplots(figsize=(max(width * scale, 3.5), max(height * scale, 3.5)))

    if s is not None:
        weights = [
            c.dispersion * c.growth for c in s.grid.cells if c.interest
        ]
        top_weight = max(weights) if weights else 1.0
        if top_weight <= 0:
            top_weight = 1.0
        size = s.grid.cell_size
        for i, cell in enumerate(s.grid.cells):
            row, col = divmod(i, s.grid.cols)
            if cell.interest:
                alpha = 0.25 + 0.55 * min(
                    (cell.dispersion * cell.growth) / top_weight, 1.0
                )
                face, cell_alpha = INTEREST_COLOR, alpha
            elif not cell.placement:
                face, cell_alpha = BLOCKED_COLOR, 1.0
            else:
                face, cell_alpha = PLAIN_COLOR, 1.0
            patch = Rectangle(
                (col * size, row * size),
                size,
                size,
                facecolor=face,
                alpha=cell_alpha,
                edgecolor="#cccccc",
                linewidth=0.3,
            )
            patch.set_gid(f"cell-{i}")
            ax.add_patch(patch)

    for rec in links:
        xa, ya = positions[rec["a"]]
        xb, yb = positions[rec["b"]]
        (line,) = ax.plot(
            [xa, xb],
            [ya, yb],
            color=channel_color(rec["channel"]),
            linewidth=1.8,
            zorder=2,
            solid_capstyle="round",
        )
        line.set_gid(f"link-{rec['a']}-{rec['b']}")

    for rec in sites:
        x, y = rec["x_m"], rec["y_m"]
        if rec["id"] == "GW":
            marker, color, size_pt = "*", "#e31a1c", 16
        elif rec["kind"] == "outdoor":
            marker, color, size_pt = "^", "#33a02c", 9
            (stem,) = ax.plot(
                [x, x],
                [y, y - 0.3 * (s.grid.cell_size if s else 10.0)],
                color="#33a02c",
                linewidth=1.0,
                zorder=3,
            )
            stem.set_gid(f"mast-{rec['id']}")
        else:
            marker, color, size_pt = "s", "#1f78b4", 8
        (point,) = ax.plot(
            x,
            y,
            marker=marker,
            color=color,
            markersize=size_pt,
            markeredgecolor="#333333",
            markeredgewidth=0.5,
            linestyle="none",
            zorder=4,
        )
        point.set_gid(f"site-{rec['id']}")
        ax.annotate(
            rec["id"],
            (x, y),
            textcoords="offset points",
            xytext=(4, 4),
            fontsize=6,
            color="#333333",
        )

    handles = [
        Line2D([], [], marker="*", color="#e31a1c", linestyle="none", label="gateway"),
        Line2D([], [], marker="s", color="#1f78b4", linestyle="none", label="indoor node"),
        Line2D([], [], marker="^", color="#33a02c", linestyle="none", label="outdoor node"),
    ]
    for ch in sorted({rec["channel"] for rec in links if rec["channel"] is not None}):
        handles.append(
            Line2D([], [], color=channel_color(ch), linewidth=2, label=f"channel {ch}")
        )
    if handles:
        ax.legend(handles=handles, loc="upper right", fontsize=6, framealpha=0.9)

    ax.set_xlim(0, width)
    ax.set_ylim(0, height)
    ax.invert_yaxis()
    ax.set_aspect("equal")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_title("Mesh network plan")
    fig.tight_layout()
    return fig


def save_map(plan_doc: dict, s: Scenario | None, path: str) -> None:
    _save(map_figure(plan_doc, s), path)


def cost_figure(totals, estimate: CostEstimate):
    """Histogram of Monte Carlo deployment-cost totals with quantile marks."""
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    spread = float(max(totals) - min(totals))
    bins = 40 if spread > 0 else 1
    ax.hist(totals, bins=bins, color="#1f78b4", edgecolor="white", linewidth=0.3)
    for value, style, label in (
        (estimate.p5, ":", "p5"),
        (estimate.p50, "--", "median"),
        (estimate.p95, ":", "p95"),
    ):
        ax.axvline(value, color="#e31a1c", linestyle=style, linewidth=1.0)
        ax.annotate(
            label,
            (value, 1.0),
            xycoords=("data", "axes fraction"),
            xytext=(2, -10),
            textcoords="offset points",
            fontsize=6,
            color="#e31a1c",
        )
    ax.set_xlabel(f"total cost ({estimate.currency})")
    ax.set_ylabel("trials")
    ax.set_title(
        f"Deployment cost, {estimate.trials} trials "
        f"(mean {estimate.mean:.0f}, std {estimate.std:.0f})"
    )
    fig.tight_layout()
    return fig


def save_cost(totals, estimate: CostEstimate, path: str) -> None:
    _save(cost_figure(totals, estimate), path)


def plan_geojson(plan_doc: dict) -> str:
    """Plan as GeoJSON in a local planar convention (meters from origin)."""
    features = []
    for rec in plan_doc["selected"]:
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [rec["x_m"], rec["y_m"]]},
                "properties": {
                    "id": rec["id"],
                    "kind": rec["kind"],
                    "cell": rec["cell"],
                    "antenna_height_m": rec["antenna_height_m"],
                },
            }
        )
    positions = {rec["id"]: (rec["x_m"], rec["y_m"]) for rec in plan_doc["selected"]}
    for rec in plan_doc["links"]:
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [
                        list(positions[rec["a"]]),
                        list(positions[rec["b"]]),
                    ],
                },
                "properties": {
                    "a": rec["a"],
                    "b": rec["b"],
                    "channel": rec["channel"],
                    "rate_mbps": rec["rate_mbps"],
                    "load_kbps": rec["load_kbps"],
                },
            }
        )
    return json.dumps({"type": "FeatureCollection", "features": features}, indent=2) + "\n"


def links_csv(plan_doc: dict) -> str:
    """Link list with loads as delimited text."""
    out = StringIO()
    out.write("a,b,distance_m,rate_mbps,channel,load_kbps\n")
    for rec in plan_doc["links"]:
        channel = "" if rec["channel"] is None else rec["channel"]
        out.write(
            f"{rec['a']},{rec['b']},{rec['distance_m']},{rec['rate_mbps']},"
            f"{channel},{rec['load_kbps']}\n"
        )
    return out.getvalue()


def candidates_csv(sites, grid_cols: int) -> str:
    """Candidate list as delimited text (id, row, col, kind, height)."""
    out = StringIO()
    out.write("id,row,col,kind,height_m\n")
    for site in sorted(sites, key=lambda site: site.id):
        row, col = divmod(site.cell, grid_cols)
        out.write(f"{site.id},{row},{col},{site.kind},{site.antenna_height}\n")
    return out.getvalue()
