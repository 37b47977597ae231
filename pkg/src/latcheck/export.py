"""DOT / JSON lattice export, witness serialisation and report figures."""

from __future__ import annotations

import base64
import csv
from pathlib import Path
from typing import Optional, Sequence

from .group import FiniteGroup
from .harness import FAIL, PASS, SKIP_BUDGET, SKIP_PRE, SuiteReport
from .lattice import SubgroupLattice


def subgroup_words(group: FiniteGroup, lat: SubgroupLattice, sid: int) -> dict:
    """A subgroup as its order plus sorted generator words (cycle notation)."""
    sub = lat[sid]
    words = sorted(group.element(g).cycle_string() for g in sub.gens)
    return {"order": sub.order, "generators": words}


def chain_words(group: FiniteGroup, lat: SubgroupLattice, chain: Sequence[int]) -> list[dict]:
    return [subgroup_words(group, lat, s) for s in chain]


def bits_base64(bits: int, order: int) -> str:
    return base64.b64encode(bits.to_bytes((order + 7) // 8, "little")).decode()


def to_dot(lat: SubgroupLattice, modular: Optional[set[int]] = None,
           normal: Optional[set[int]] = None, name: str = "lattice") -> str:
    """Hasse diagram; node label ``order|class-id``.

    Modular elements are double circles, normal subgroups are filled.
    """
    modular = modular or set()
    normal = normal or set()
    lines = [f'digraph "{name}" {{', "  rankdir=BT;", "  node [shape=circle];"]
    for sid in range(len(lat)):
        attrs = [f'label="{lat.orders[sid]}|{lat.class_of[sid]}"']
        if sid in modular:
            attrs.append("shape=doublecircle")
        if sid in normal:
            attrs.append("style=filled")
        lines.append(f"  s{sid} [{', '.join(attrs)}];")
    for x, ys in enumerate(lat.upper_covers):
        for y in ys:
            lines.append(f"  s{x} -> s{y};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(lat: SubgroupLattice, spec: str, modular: Optional[set[int]] = None,
            normal: Optional[set[int]] = None) -> dict:
    group = lat.group
    subgroups = []
    for sid, sub in enumerate(lat.subgroups):
        entry = {
            "id": sid,
            "order": sub.order,
            "class": lat.class_of[sid],
            "bits": bits_base64(sub.bits, group.order),
            "generators": [group.element(g).cycle_string() for g in sub.gens],
        }
        if normal is not None:
            entry["normal"] = sid in normal
        if modular is not None:
            entry["modular"] = sid in modular
        subgroups.append(entry)
    return {
        "spec": spec,
        "order": group.order,
        "subgroups": subgroups,
        "covers": [[x, y] for x, ys in enumerate(lat.upper_covers) for y in ys],
        "classes": lat.classes,
    }


# figures ----------------------------------------------------------------------

STATUS_COLOURS = {PASS: "#4c9a2a", FAIL: "#c0392b", SKIP_PRE: "#d5d8dc", SKIP_BUDGET: "#f0b429"}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def hasse_figure(lat: SubgroupLattice, path: Path, modular: Optional[set[int]] = None,
                 normal: Optional[set[int]] = None, title: str = "") -> Path:
    """Draw the Hasse diagram, one row per height (longest chain from 1)."""
    plt = _pyplot()
    modular = modular or set()
    normal = normal or set()
    height = [0] * len(lat)
    for x in range(len(lat)):
        for y in lat.upper_covers[x]:
            height[y] = max(height[y], height[x] + 1)
    rows: dict[int, list[int]] = {}
    for sid, h in enumerate(height):
        rows.setdefault(h, []).append(sid)
    pos = {}
    for h, members in rows.items():
        for i, sid in enumerate(members):
            pos[sid] = ((i + 1) / (len(members) + 1), h)
    widest = max(len(m) for m in rows.values())
    fig, ax = plt.subplots(figsize=(min(4 + 0.25 * widest, 40), 2 + 1.2 * len(rows)))
    for x, ys in enumerate(lat.upper_covers):
        for y in ys:
            ax.plot([pos[x][0], pos[y][0]], [pos[x][1], pos[y][1]], color="0.7", lw=0.6, zorder=1)
    for sid, (px, py) in pos.items():
        face = "#2e86c1" if sid in normal else "white"
        edge = "#8e44ad" if sid in modular else "black"
        ax.scatter([px], [py], s=120, c=face, edgecolors=edge,
                   linewidths=2.0 if sid in modular else 0.8, zorder=2)
        if len(lat) <= 200:
            ax.annotate(str(lat.orders[sid]), (px, py), textcoords="offset points",
                        xytext=(0, 7), ha="center", fontsize=7)
    ax.set_yticks(sorted(rows))
    ax.set_ylabel("height")
    ax.set_xticks([])
    ax.set_title(title or f"{len(lat)} subgroups")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def write_verdicts_tsv(report: SuiteReport, path: Path) -> Path:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t")
        writer.writerow(["group", "order", "claim", "status", "elapsed_s", "detail"])
        for r in report.reports:
            for e in r.entries:
                writer.writerow([r.group, r.order, e.claim, e.status, f"{e.elapsed:.4f}", e.detail])
    return Path(path)


def verdict_figure(report: SuiteReport, path: Path) -> Path:
    """Status grid: groups down, claims across."""
    from matplotlib.colors import ListedColormap
    from matplotlib.patches import Patch

    plt = _pyplot()
    statuses = [PASS, FAIL, SKIP_PRE, SKIP_BUDGET]
    claims: list[str] = []
    for r in report.reports:
        for e in r.entries:
            if e.claim not in claims:
                claims.append(e.claim)
    grid = [[-1] * len(claims) for _ in report.reports]
    for i, r in enumerate(report.reports):
        for e in r.entries:
            grid[i][claims.index(e.claim)] = statuses.index(e.status)
    cmap = ListedColormap(["white"] + [STATUS_COLOURS[s] for s in statuses])
    fig, ax = plt.subplots(figsize=(2 + 0.35 * max(len(claims), 1), 1.5 + 0.3 * max(len(grid), 1)))
    ax.imshow([[v + 1 for v in row] for row in grid] or [[0]], cmap=cmap, vmin=0,
              vmax=len(statuses), aspect="auto")
    ax.set_xticks(range(len(claims)))
    ax.set_xticklabels(claims, rotation=70, ha="right", fontsize=7)
    ax.set_yticks(range(len(report.reports)))
    ax.set_yticklabels([r.group if len(r.group) < 28 else r.group[:25] + "..." for r in report.reports],
                       fontsize=7)
    ax.legend(handles=[Patch(color=STATUS_COLOURS[s], label=s) for s in statuses],
              loc="upper left", bbox_to_anchor=(1.01, 1.0), fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)
