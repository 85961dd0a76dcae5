"""Serialization to Pajek, VOSviewer-style files, CSV edge lists, SVG.

All emitted files are UTF-8 with LF endings; reals use fixed 6-decimal
notation, so output is byte-identical across runs and platforms.
Labels keep their class marker (``#tag``, ``@user``, ``&author``) so
same-named actants of different classes stay distinguishable.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .errors import DomainError
from .graph import ActantGraph, GraphNode


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def normalize_coords(
    coords: dict[int, tuple[float, float]]
) -> dict[int, tuple[float, float]]:
    """Map the bounding box into [0,1]^2 preserving aspect ratio; a
    degenerate single-point layout maps to (0.5, 0.5)."""
    if not coords:
        return {}
    xs = [xy[0] for xy in coords.values()]
    ys = [xy[1] for xy in coords.values()]
    width = max(xs) - min(xs)
    height = max(ys) - min(ys)
    extent = max(width, height)
    if extent <= 0.0:
        return {i: (0.5, 0.5) for i in coords}
    cx = (max(xs) + min(xs)) / 2.0
    cy = (max(ys) + min(ys)) / 2.0
    scale = 1.0 / extent
    return {
        i: (0.5 + (x - cx) * scale, 0.5 + (y - cy) * scale)
        for i, (x, y) in coords.items()
    }


def _node_label(node: GraphNode) -> str:
    label = node.display
    if '"' in label:  # Pajek quoting has no escape; canonical forms never hit this
        label = label.replace('"', "'")
    return label


def write_pajek(g: ActantGraph, sink) -> int:
    """Write a Pajek .net document; returns the byte count written.

    ``*Vertices N``, then 1-based ``i "label"`` records (with x y in
    [0,1]^2 when coordinates are present), then ``*Edges`` with
    ``i j w`` lines sorted ascending, i < j.
    """
    parts = [f"*Vertices {g.n_nodes}\n"]
    norm = normalize_coords(g.coords) if g.coords else None
    for i, node in enumerate(g.nodes, start=1):
        line = f'{i} "{_node_label(node)}"'
        if norm is not None:
            x, y = norm[i - 1]
            line += f" {_fmt(x)} {_fmt(y)}"
        parts.append(line + "\n")
    parts.append("*Edges\n")
    for i, j, w in g.edge_list():
        parts.append(f"{i + 1} {j + 1} {w}\n")
    text = "".join(parts)
    sink.write(text)
    return len(text.encode("utf-8"))


_MARKER_TO_CLASS = {"#": "hashtag", "@": "mention", "&": "author"}


def _node_from_label(label: str) -> GraphNode:
    cls = _MARKER_TO_CLASS.get(label[:1], "word")
    canonical = label[1:].lower() if cls != "word" else label.lower()
    return GraphNode(cls, canonical, label, 0)


def parse_pajek(source) -> ActantGraph:
    """Parse a Pajek .net document produced by :func:`write_pajek`
    (vertices with optional coordinates, undirected *Edges section).
    Document frequencies are not stored in the format and read as 0."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = source
    nodes: list[GraphNode] = []
    coords: dict[int, tuple[float, float]] = {}
    edges: dict[tuple[int, int], int] = {}
    section = None
    expected = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("*vertices"):
            section = "vertices"
            expected = int(line.split()[1])
            continue
        if low.startswith("*edges") or low.startswith("*arcs"):
            section = "edges"
            continue
        if section == "vertices":
            idx_str, rest = line.split(" ", 1)
            rest = rest.strip()
            if not rest.startswith('"'):
                raise ValueError(f"unquoted vertex label: {line!r}")
            closing = rest.index('"', 1)
            label = rest[1:closing]
            nodes.append(_node_from_label(label))
            tail = rest[closing + 1 :].split()
            if len(tail) >= 2:
                coords[int(idx_str) - 1] = (float(tail[0]), float(tail[1]))
        elif section == "edges":
            fields = line.split()
            i, j = int(fields[0]) - 1, int(fields[1]) - 1
            w = int(float(fields[2])) if len(fields) > 2 else 1
            key = (i, j) if i < j else (j, i)
            edges[key] = w
    if expected is not None and expected != len(nodes):
        raise ValueError(f"vertex count mismatch: header {expected}, got {len(nodes)}")
    return ActantGraph(nodes, edges, coords=coords or None)


VOS_MAP_HEADER = "id\tlabel\tx\ty\tcluster\tweight<Occurrences>"


def write_vos(g: ActantGraph, map_sink, network_sink) -> tuple[int, int]:
    """Write the VOSviewer-style map/network file pair; returns byte
    counts. Requires coordinates and a partition; node weight is the
    document frequency, ids follow vocabulary order (1-based)."""
    if not g.coords:
        raise DomainError("write_vos requires coordinates")
    if not g.partition:
        raise DomainError("write_vos requires a cluster partition")
    norm = normalize_coords(g.coords)
    map_lines = [VOS_MAP_HEADER + "\n"]
    for i, node in enumerate(g.nodes):
        x, y = norm[i]
        map_lines.append(
            f"{i + 1}\t{_node_label(node)}\t{_fmt(x)}\t{_fmt(y)}"
            f"\t{g.partition[i]}\t{node.doc_frequency}\n"
        )
    map_text = "".join(map_lines)
    net_text = "".join(f"{i + 1}\t{j + 1}\t{w}\n" for i, j, w in g.edge_list())
    map_sink.write(map_text)
    network_sink.write(net_text)
    return len(map_text.encode("utf-8")), len(net_text.encode("utf-8"))


def write_edgelist_csv(g: ActantGraph, sink) -> int:
    """RFC-4180 edge list with header
    ``source,target,weight,source_class,target_class``; rows sorted like
    the Pajek edges. Returns the byte count."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source", "target", "weight", "source_class", "target_class"])
    for i, j, w in g.edge_list():
        writer.writerow(
            [
                _node_label(g.nodes[i]),
                _node_label(g.nodes[j]),
                w,
                g.nodes[i].cls,
                g.nodes[j].cls,
            ]
        )
    text = buf.getvalue()
    sink.write(text)
    return len(text.encode("utf-8"))


#: default cluster palette (cycled), chosen for contrast on white
PALETTE = (
    "#d62728",
    "#1f77b4",
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
)


@dataclass(frozen=True)
class SvgStyle:
    node_scale: float = 4.0  # circle radius = node_scale * doc_frequency
    label_min_frequency: int = 1
    palette: tuple[str, ...] = PALETTE
    size: int = 1000
    margin: int = 60


def render_svg(g: ActantGraph, style: SvgStyle = SvgStyle()) -> str:
    """Static SVG 1.1 rendering: circles sized by document frequency and
    colored by cluster, edge widths proportional to weight, labels for
    nodes at or above the label frequency floor. Deterministic."""
    if g.coords is None:
        raise DomainError("render_svg requires coordinates")
    norm = normalize_coords(g.coords)
    span = style.size - 2 * style.margin

    def px(i: int) -> tuple[float, float]:
        x, y = norm[i]
        return (style.margin + x * span, style.size - (style.margin + y * span))

    def color(i: int) -> str:
        if g.partition is None:
            return style.palette[0]
        return style.palette[(g.partition[i] - 1) % len(style.palette)]

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{style.size}" height="{style.size}" '
        f'viewBox="0 0 {style.size} {style.size}">\n',
        '<g stroke="#999999" stroke-opacity="0.6">\n',
    ]
    for i, j, w in g.edge_list():
        x1, y1 = px(i)
        x2, y2 = px(j)
        out.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke-width="{_fmt(0.5 * w)}"/>\n'
        )
    out.append("</g>\n<g>\n")
    for i, node in enumerate(g.nodes):
        x, y = px(i)
        r = style.node_scale * max(node.doc_frequency, 1)
        out.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r)}" fill="{color(i)}"/>\n'
        )
    out.append('</g>\n<g font-family="sans-serif" font-size="12" text-anchor="middle">\n')
    for i, node in enumerate(g.nodes):
        if node.doc_frequency >= style.label_min_frequency:
            x, y = px(i)
            out.append(
                f'<text x="{_fmt(x)}" y="{_fmt(y - style.node_scale * max(node.doc_frequency, 1) - 3)}">'
                f"{escape(_node_label(node))}</text>\n"
            )
    out.append("</g>\n</svg>\n")
    return "".join(out)
