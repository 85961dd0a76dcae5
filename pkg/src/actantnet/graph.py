"""Weighted undirected actant graphs and the whole-vs-2-mode comparison.

Nodes are typed actants; edges carry positive integer co-occurrence
counts. The graph built from the whole matrix contains every edge of
the 2-mode (cross-class) projection plus the within-class ones, which
is exactly why the 2-mode view drops actants whose only co-occurrences
are with nodes of their own class.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from .errors import DomainError
from .freq import class_rank
from .matrix import Block, CooccurrenceMatrix


@dataclass(frozen=True, slots=True)
class GraphNode:
    cls: str
    canonical: str
    display: str
    doc_frequency: int

    @property
    def key(self) -> tuple[str, str]:
        return (self.cls, self.canonical)

    @property
    def sort_key(self) -> tuple[int, str]:
        return (class_rank(self.cls), self.canonical)


class ActantGraph:
    """Undirected weighted graph; no self-loops, no duplicate edges.

    ``partition`` (node index -> 1-based cluster id) and ``coords``
    (node index -> (x, y)) are optional annotations set by the
    clustering and layout passes.
    """

    def __init__(self, nodes, edges=None, partition=None, coords=None):
        self.nodes: list[GraphNode] = list(nodes)
        self.edges: dict[tuple[int, int], int] = {}
        self.partition: dict[int, int] | None = dict(partition) if partition else None
        self.coords: dict[int, tuple[float, float]] | None = (
            dict(coords) if coords else None
        )
        if edges:
            for (i, j), w in edges.items():
                self.add_edge(i, j, w)

    def add_edge(self, i: int, j: int, weight: int) -> None:
        if i == j:
            raise ValueError("self-loops are not allowed")
        if not (0 <= i < len(self.nodes) and 0 <= j < len(self.nodes)):
            raise ValueError(f"edge endpoint out of range: ({i}, {j})")
        if weight <= 0:
            raise ValueError("edge weight must be positive")
        key = (i, j) if i < j else (j, i)
        if key in self.edges:
            raise ValueError(f"duplicate edge {key}")
        self.edges[key] = int(weight)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_list(self) -> list[tuple[int, int, int]]:
        """Edges as (i, j, w), i < j, sorted ascending."""
        return [(i, j, self.edges[(i, j)]) for i, j in sorted(self.edges)]

    def adjacency(self) -> list[dict[int, int]]:
        adj: list[dict[int, int]] = [{} for _ in self.nodes]
        for (i, j), w in self.edges.items():
            adj[i][j] = w
            adj[j][i] = w
        return adj

    def degrees(self) -> list[int]:
        deg = [0] * len(self.nodes)
        for (i, j), w in self.edges.items():
            deg[i] += w
            deg[j] += w
        return deg

    def node_index(self) -> dict[tuple[str, str], int]:
        return {node.key: i for i, node in enumerate(self.nodes)}

    def induced(self, node_ids) -> "ActantGraph":
        """Subgraph on the given node indices, preserving node order."""
        keep = sorted(node_ids)
        remap = {old: new for new, old in enumerate(keep)}
        sub = ActantGraph([self.nodes[i] for i in keep])
        for (i, j), w in self.edges.items():
            if i in remap and j in remap:
                sub.add_edge(remap[i], remap[j], w)
        if self.partition is not None:
            sub.partition = {remap[i]: c for i, c in self.partition.items() if i in remap}
        if self.coords is not None:
            sub.coords = {remap[i]: xy for i, xy in self.coords.items() if i in remap}
        return sub


def to_graph(
    C: CooccurrenceMatrix, min_edge_weight: int = 1, classes=None
) -> ActantGraph:
    """Whole-matrix graph: one node per vocabulary entry of the selected
    classes, one edge per off-diagonal cell >= ``min_edge_weight``. The
    diagonal becomes the node document frequency, never an edge."""
    if min_edge_weight < 1:
        raise ValueError("min_edge_weight must be >= 1")
    if classes is None:
        selected = set(C.block_map)
    else:
        selected = set(classes)
        missing = selected - set(C.block_map)
        if missing:
            raise DomainError(f"classes not in the matrix: {sorted(missing)}")

    diag = C.diagonal()
    keep = [
        idx
        for cls, (start, stop) in C.block_map.items()
        if cls in selected
        for idx in range(start, stop)
    ]
    keep.sort()
    remap = {old: new for new, old in enumerate(keep)}
    nodes = [
        GraphNode(e.cls, e.canonical, e.display, int(diag[old]))
        for old, e in ((k, C.cols[k]) for k in keep)
    ]
    g = ActantGraph(nodes)
    for i, j, v in zip(C.ii, C.jj, C.values):
        if i == j or v < min_edge_weight:
            continue
        a = remap.get(int(i))
        b = remap.get(int(j))
        if a is not None and b is not None:
            g.add_edge(a, b, int(v))
    return g


def bipartite_graph(block: Block, min_edge_weight: int = 1) -> ActantGraph:
    """2-mode graph from a cross-class block: nodes are all thresholded
    vocabulary members of the two classes; edges only between classes."""
    if block.row_class == block.col_class:
        raise DomainError("bipartite_graph requires a cross-class block")
    if min_edge_weight < 1:
        raise ValueError("min_edge_weight must be >= 1")

    groups = [
        (block.row_class, block.row_entries),
        (block.col_class, block.col_entries),
    ]
    groups.sort(key=lambda g: class_rank(g[0]))
    nodes = []
    offsets: dict[str, int] = {}
    for cls, entries in groups:
        offsets[cls] = len(nodes)
        nodes.extend(
            GraphNode(e.cls, e.canonical, e.display, e.doc_frequency) for e in entries
        )
    g = ActantGraph(nodes)
    ro = offsets[block.row_class]
    co = offsets[block.col_class]
    for r, c, v in zip(block.ri, block.ci, block.values):
        if v >= min_edge_weight:
            g.add_edge(ro + int(r), co + int(c), int(v))
    return g


def connected_components(g: ActantGraph) -> list[list[int]]:
    """Components as sorted index lists, ordered by descending size with
    ties broken by the component holding the smallest (class, canonical)."""
    adj = g.adjacency()
    seen = [False] * g.n_nodes
    comps: list[list[int]] = []
    for start in range(g.n_nodes):
        if seen[start]:
            continue
        comp = []
        queue = deque([start])
        seen[start] = True
        while queue:
            u = queue.popleft()
            comp.append(u)
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        comp.sort()
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), min(g.nodes[i].sort_key for i in c)))
    return comps


def largest_component(g: ActantGraph) -> ActantGraph:
    """Induced subgraph on the largest connected node set; isolated
    nodes count as size-1 components. Idempotent; empty in, empty out."""
    comps = connected_components(g)
    if not comps:
        return ActantGraph([])
    return g.induced(comps[0])


@dataclass
class ComparisonReport:
    """Whole-matrix vs 2-mode comparison.

    ``lost_actants`` are the nodes with at least one edge in the whole
    graph but none in the 2-mode graph: their only co-occurrences are
    within one class, so the 2-mode projection cuts them off.
    """

    whole_lcc_size: int
    two_mode_lcc_size: int
    lost_actants: list[tuple[str, str]]
    per_class_loss: dict[str, int] = field(default_factory=dict)

    @property
    def lost_count(self) -> int:
        return len(self.lost_actants)

    def to_kv(self) -> str:
        lost = ",".join(f"{cls}:{canonical}" for cls, canonical in self.lost_actants)
        per_cls = ",".join(f"{c}:{n}" for c, n in sorted(self.per_class_loss.items()))
        return (
            f"whole_lcc={self.whole_lcc_size}\n"
            f"two_mode_lcc={self.two_mode_lcc_size}\n"
            f"lost={lost}\n"
            f"lost_count={self.lost_count}\n"
            f"per_class_loss={per_cls}\n"
        )

    def to_text(self) -> str:
        lines = [
            f"largest component (whole matrix): {self.whole_lcc_size} actants",
            f"largest component (2-mode):       {self.two_mode_lcc_size} actants",
            f"actants lost by the 2-mode view:  {self.lost_count}",
        ]
        for cls, n in sorted(self.per_class_loss.items()):
            lines.append(f"  {cls}: {n}")
        for cls, canonical in self.lost_actants:
            lines.append(f"  - {cls} {canonical}")
        return "\n".join(lines) + "\n"


def compare_modes(whole: ActantGraph, two_mode: ActantGraph) -> ComparisonReport:
    """Compare the whole-matrix graph against the 2-mode graph built
    from the same vocabulary (same node universe required)."""
    keys_w = sorted(n.key for n in whole.nodes)
    keys_t = sorted(n.key for n in two_mode.nodes)
    if keys_w != keys_t:
        raise DomainError("graphs were not built from the same vocabulary")

    def non_isolated(g: ActantGraph) -> set[tuple[str, str]]:
        out = set()
        for i, j in g.edges:
            out.add(g.nodes[i].key)
            out.add(g.nodes[j].key)
        return out

    in_whole = non_isolated(whole)
    in_two = non_isolated(two_mode)
    lost = sorted(in_whole - in_two, key=lambda k: (class_rank(k[0]), k[1]))
    per_class = Counter(cls for cls, _ in lost)
    return ComparisonReport(
        whole_lcc_size=largest_component(whole).n_nodes,
        two_mode_lcc_size=largest_component(two_mode).n_nodes,
        lost_actants=lost,
        per_class_loss=dict(per_class),
    )
