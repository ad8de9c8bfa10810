"""Matplotlib figure of a run: level and layer sizes, plus the Hasse diagram by layer."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .report import layer_color  # noqa: E402


def _layer_of(doc: dict) -> dict[str, object]:
    out = {}
    for row in doc["layers"]:
        for c in row["cells"]:
            out[c] = row["n"]
    return out


def hasse_layout(space) -> dict[int, tuple[float, float]]:
    """Cells placed by height, spread evenly within each row."""
    h = space.height()
    rows: dict[int, list[int]] = {}
    for i in range(len(space)):
        rows.setdefault(h[i], []).append(i)
    pos = {}
    for y, members in rows.items():
        k = len(members)
        for j, i in enumerate(members):
            pos[i] = ((j + 0.5) / k, float(y))
    return pos


def render_figure(inst, doc: dict, path) -> None:
    space = inst.space
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5),
                                   gridspec_kw={"width_ratios": [1, 1.6]})
    levels = [r["size"] for r in doc["filtration"]]
    finite_layers = [r for r in doc["layers"] if r["n"] != "core"]
    ns = list(range(len(levels)))
    ax1.bar([n - 0.2 for n in ns], levels, width=0.4, label="|C_n|", color="#3288bd")
    ax1.bar([r["n"] + 0.2 for r in finite_layers], [r["size"] for r in finite_layers],
            width=0.4, label="|A_n|", color="#fdae61")
    ax1.set_xlabel("n")
    ax1.set_ylabel("cells")
    ax1.set_xticks(ns)
    ax1.set_title(f"{doc['name']}: iter = {doc['iter']}")
    ax1.legend()

    pos = hasse_layout(space)
    for a, b in space.hasse:
        (x0, y0), (x1, y1) = pos[a], pos[b]
        ax2.plot([x0, x1], [y0, y1], color="#999999", linewidth=0.4, zorder=1)
    layer = _layer_of(doc)
    xs = [pos[i][0] for i in range(len(space))]
    ys = [pos[i][1] for i in range(len(space))]
    colors = [layer_color(layer[c]) for c in space.cells]
    ax2.scatter(xs, ys, c=colors, s=max(6, 400 // max(1, len(space) ** 0.5)),
                edgecolors="#333333", linewidths=0.3, zorder=2)
    if len(space) <= 40:
        for i, c in enumerate(space.cells):
            ax2.annotate(c, pos[i], fontsize=6, ha="center", va="bottom",
                         xytext=(0, 3), textcoords="offset points")
    seen = []
    for row in doc["layers"]:
        tag = "core" if row["n"] == "core" else f"A{row['n']}"
        if row["size"]:
            seen.append(plt.Line2D([], [], marker="o", linestyle="", label=tag,
                                   color=layer_color(row["n"])))
    ax2.legend(handles=seen, fontsize=7, loc="upper left", bbox_to_anchor=(1.0, 1.0))
    ax2.set_yticks(sorted(set(ys)))
    ax2.set_ylabel("cell dimension (height)")
    ax2.set_xticks([])
    ax2.set_title("face poset coloured by layer")
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
