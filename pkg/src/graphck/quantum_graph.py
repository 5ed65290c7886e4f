"""Directed graphs attached to quantum-relation data.

Two generated families live here: the relation graph on the n x n generator
grid (edges encode which generator pairs carry a nontrivial exchange
relation) and the involution graph (a loop at each diagonal generator and an
antiparallel pair between x_ij and x_ji). Vertices are numbered row-major:
x11, x12, ..., x1n, x21, ..., xnn.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact_linalg import ONE, SparseMat


def vertex_label(row: int, col: int) -> str:
    """Canonical label for grid vertex (row, col); compact below 10."""
    if row < 10 and col < 10:
        return f"x{row}{col}"
    return f"x{row}.{col}"


def _label_sort_key(label: str):
    if label.startswith("x") and len(label) >= 3:
        body = label[1:]
        if "." in body:
            r, c = body.split(".", 1)
            if r.isdigit() and c.isdigit():
                return (0, int(r), int(c), label)
        elif body.isdigit() and len(body) == 2:
            return (0, int(body[0]), int(body[1]), label)
    return (1, 0, 0, label)


@dataclass(frozen=True)
class DirectedGraph:
    """A finite directed graph with at most one edge per ordered vertex pair.

    `n` records the grid parameter for generated families and is 0 for
    free-form graphs. Edges are (source, target, label) triples; labels are
    unique within a graph.
    """

    n: int
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]

    def __post_init__(self):
        seen = set(self.vertices)
        if len(seen) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        pairs = set()
        labels = set()
        for src, dst, label in self.edges:
            if src not in seen or dst not in seen:
                raise ValueError(f"edge endpoint {src!r}->{dst!r} not among vertices")
            if (src, dst) in pairs:
                raise ValueError(f"duplicate edge {src!r}->{dst!r}")
            if label in labels:
                raise ValueError(f"duplicate edge label {label!r}")
            pairs.add((src, dst))
            labels.add(label)

    def index(self, label: str) -> int:
        """1-based canonical index of a vertex."""
        try:
            return self.vertices.index(label) + 1
        except ValueError:
            raise KeyError(f"unknown vertex {label!r}") from None

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def edge_labels(self) -> tuple[str, ...]:
        return tuple(label for _, _, label in self.edges)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "vertices": list(self.vertices),
            "edges": [list(edge) for edge in self.edges],
        }

    @staticmethod
    def from_json_dict(payload) -> "DirectedGraph":
        return DirectedGraph(
            int(payload["n"]),
            tuple(payload["vertices"]),
            tuple((str(s), str(t), str(l)) for s, t, l in payload["edges"]),
        )


def _edge_label(graph_vertices: tuple[str, ...], src: str, dst: str) -> str:
    si = graph_vertices.index(src) + 1
    ti = graph_vertices.index(dst) + 1
    return f"e{si}_{ti}"


def build_relation_graph(n: int) -> DirectedGraph:
    """The relation graph on the n x n generator grid.

    Edge rule for distinct vertices x_ij, x_kl:
      same row (i == k): edge from the smaller column to the larger;
      same column (j == l): edge from the smaller row to the larger;
      antidiagonal pair (i < k and l < j): both directions;
      diagonal pair (i < k and j < l): no edge.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    vertices = tuple(vertex_label(i, j) for i in range(1, n + 1) for j in range(1, n + 1))
    edges: list[tuple[str, str, str]] = []

    def put(a: str, b: str) -> None:
        edges.append((a, b, _edge_label(vertices, a, b)))

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            here = vertex_label(i, j)
            for l in range(j + 1, n + 1):
                put(here, vertex_label(i, l))
            for k in range(i + 1, n + 1):
                put(here, vertex_label(k, j))
    for i in range(1, n + 1):
        for k in range(i + 1, n + 1):
            for j in range(1, n + 1):
                for l in range(j + 1, n + 1):
                    ne = vertex_label(i, l)
                    sw = vertex_label(k, j)
                    put(ne, sw)
                    put(sw, ne)
    return DirectedGraph(n, vertices, tuple(edges))


def build_pi_graph(n: int) -> DirectedGraph:
    """The involution graph: a loop at each x_ii and antiparallel edges
    between x_ij and x_ji for i != j. Total edge count is n^2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    vertices = tuple(vertex_label(i, j) for i in range(1, n + 1) for j in range(1, n + 1))
    edges = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            src = vertex_label(i, j)
            dst = vertex_label(j, i)
            edges.append((src, dst, _edge_label(vertices, src, dst)))
    return DirectedGraph(n, vertices, tuple(edges))


def adjacency_matrix(graph: DirectedGraph) -> SparseMat:
    """0/1 adjacency matrix in canonical vertex order."""
    dim = graph.vertex_count
    entries = {}
    for src, dst, _ in graph.edges:
        entries[(graph.index(src), graph.index(dst))] = ONE
    return SparseMat(dim, dim, entries)


def line_graph(graph: DirectedGraph) -> DirectedGraph:
    """Vertices are the edges of `graph`; e1 -> e2 whenever the target of e1
    is the source of e2. A single loop yields a single vertex with a loop."""
    vertices = graph.edge_labels()
    edges = []
    for s1, t1, l1 in graph.edges:
        for s2, t2, l2 in graph.edges:
            if t1 == s2:
                edges.append((l1, l2, f"{l1}>{l2}"))
    return DirectedGraph(0, vertices, tuple(edges))


def edge_matrix(graph: DirectedGraph) -> SparseMat:
    """The edge matrix: rows/cols indexed by edges in insertion order, with a
    1 at (e1, e2) when the target of e1 equals the source of e2."""
    labels = graph.edge_labels()
    pos = {label: k + 1 for k, label in enumerate(labels)}
    entries = {}
    for s1, t1, l1 in graph.edges:
        for s2, t2, l2 in graph.edges:
            if t1 == s2:
                entries[(pos[l1], pos[l2])] = ONE
    return SparseMat(len(labels), len(labels), entries)


def entry_degree(graph: DirectedGraph, vertex: str) -> int:
    """Number of incoming edges."""
    graph.index(vertex)
    return sum(1 for _, dst, _ in graph.edges if dst == vertex)


def exit_degree(graph: DirectedGraph, vertex: str) -> int:
    """Number of outgoing edges."""
    graph.index(vertex)
    return sum(1 for src, _, _ in graph.edges if src == vertex)


def sinks(graph: DirectedGraph) -> tuple[str, ...]:
    """Vertices with no outgoing edges, in canonical order."""
    with_exit = {src for src, _, _ in graph.edges}
    return tuple(v for v in graph.vertices if v not in with_exit)


def sources(graph: DirectedGraph) -> tuple[str, ...]:
    """Vertices with no incoming edges, in canonical order."""
    with_entry = {dst for _, dst, _ in graph.edges}
    return tuple(v for v in graph.vertices if v not in with_entry)


def graph_union(g1: DirectedGraph, g2: DirectedGraph) -> DirectedGraph:
    """Set union of vertices and edges.

    Edges are identified by their (source, target) pair; when both graphs
    carry the same pair under different labels the lexicographically smaller
    label wins, which keeps the union commutative. The output is sorted
    canonically, and `n` survives only when one operand's grid contains the
    other's vertices.
    """
    vertices = tuple(sorted(set(g1.vertices) | set(g2.vertices), key=_label_sort_key))
    by_pair: dict[tuple[str, str], str] = {}
    for src, dst, label in g1.edges + g2.edges:
        prior = by_pair.get((src, dst))
        if prior is None or label < prior:
            by_pair[(src, dst)] = label
    index = {v: k for k, v in enumerate(vertices)}
    edges = tuple(
        (src, dst, by_pair[(src, dst)])
        for src, dst in sorted(by_pair, key=lambda p: (index[p[0]], index[p[1]]))
    )
    n = 0
    for candidate in (max(g1.n, g2.n), g1.n, g2.n):
        if candidate >= 1 and len(vertices) == candidate * candidate and all(
                v == vertex_label(i, j)
                for v, (i, j) in zip(vertices, ((i, j) for i in range(1, candidate + 1)
                                                for j in range(1, candidate + 1)))):
            n = candidate
            break
    return DirectedGraph(n, vertices, edges)


def to_dot(graph: DirectedGraph) -> str:
    """Deterministic Graphviz rendering: vertices in canonical order, then
    edges in insertion order."""
    lines = ["digraph G {"]
    for v in graph.vertices:
        lines.append(f'  "{v}";')
    for src, dst, label in graph.edges:
        lines.append(f'  "{src}" -> "{dst}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
