"""Figure rendering for reports: the completeness-property semilattice with
verdict coloring, and Hasse diagrams of lattice-signature algebras.

Everything renders to files through the Agg backend; nothing here opens a
window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .core import FiniteAlgebra

HIERARCHY_POS = {
    "U": (0.0, 0.0),
    "NNU": (-1.0, 1.0),
    "SPU": (1.0, 1.0),
    "AU": (-2.0, 2.0),
    "S": (0.0, 2.0),
    "PU": (2.0, 2.0),
    "AS": (-1.0, 3.0),
    "PS": (1.0, 3.0),
}

HIERARCHY_LINES = (
    ("U", "NNU"), ("U", "SPU"), ("NNU", "AU"), ("NNU", "S"),
    ("SPU", "S"), ("SPU", "PU"), ("S", "AS"), ("S", "PS"),
    ("AU", "AS"), ("PU", "PS"),
)


def _verdict_color(entry: dict) -> str:
    certified = entry["status"] == "certified"
    if entry["value"]:
        return "#2e7d32" if certified else "#a5d6a7"
    return "#c62828" if certified else "#ef9a9a"


def render_hierarchy(properties: dict, path: str, title: str = "") -> str:
    """Color the completeness semilattice by the verdicts in a report's
    `properties` map and save it."""
    fig, ax = plt.subplots(figsize=(6.5, 5))
    for a, b in HIERARCHY_LINES:
        xa, ya = HIERARCHY_POS[a]
        xb, yb = HIERARCHY_POS[b]
        ax.plot([xa, xb], [ya, yb], color="0.6", lw=1.2, zorder=1)
    for name, (x, y) in HIERARCHY_POS.items():
        entry = properties.get(name)
        color = _verdict_color(entry) if entry else "0.85"
        ax.scatter([x], [y], s=1500, color=color, edgecolors="0.2", zorder=2)
        label = name
        if entry:
            label += "\n" + ("T" if entry["value"] else "F")
            label += "" if entry["status"] == "certified" else "?"
        ax.annotate(label, (x, y), ha="center", va="center", fontsize=9, zorder=3)
    ax.set_title(title or "completeness properties (strongest at the bottom)")
    ax.set_axis_off()
    ax.margins(0.15)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_hasse(algebra: FiniteAlgebra, path: str) -> str:
    """Hasse diagram from the meet table; layers by longest chain from the
    bottom, elements labeled with their names."""
    n = algebra.size
    meet = algebra.tables["meet"]
    leq = [[meet[a * n + b] == a for b in range(n)] for a in range(n)]
    covers = []
    for a in range(n):
        for b in range(n):
            if a == b or not leq[a][b]:
                continue
            if any(leq[a][c] and leq[c][b] and c not in (a, b) for c in range(n)):
                continue
            covers.append((a, b))
    depth = [0] * n
    changed = True
    while changed:
        changed = False
        for a, b in covers:
            if depth[b] < depth[a] + 1:
                depth[b] = depth[a] + 1
                changed = True
    layers = {}
    for e in range(n):
        layers.setdefault(depth[e], []).append(e)
    pos = {}
    for level, members in layers.items():
        members.sort()
        for i, e in enumerate(members):
            pos[e] = (i - (len(members) - 1) / 2.0, level)

    fig, ax = plt.subplots(figsize=(5, 4.5))
    for a, b in covers:
        ax.plot([pos[a][0], pos[b][0]], [pos[a][1], pos[b][1]],
                color="0.5", lw=1.1, zorder=1)
    for e in range(n):
        ax.scatter([pos[e][0]], [pos[e][1]], s=300, color="#1565c0",
                   edgecolors="0.2", zorder=2)
        ax.annotate(algebra.name_of(e), (pos[e][0], pos[e][1] + 0.14),
                    ha="center", fontsize=9, zorder=3)
    ax.set_title(algebra.label or "lattice")
    ax.set_axis_off()
    ax.margins(0.2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
