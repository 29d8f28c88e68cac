"""Finite directed multigraphs and their basic calculus.

Conventions
-----------
An edge ``e`` runs from its source ``s(e)`` to its range ``r(e)``.  A path
``e1 e2 ... en`` is composable when ``s(e_i) = r(e_{i+1})``, so paths compose
like functions: the rightmost edge is traversed first.  Consequently
``r(e1...en) = r(e1)`` and ``s(e1...en) = s(e_n)``.

The adjacency matrix follows ``A[i][j] = #{e : s(e) = v_i, r(e) = v_j}``,
which makes the entry sum of ``A^n`` count paths of length ``n``.

Vertex order is part of a graph value: it fixes matrix indexing, so two
graphs that differ only in vertex order are distinct values (though they
are isomorphic).  All operations return new graphs; nothing is mutated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, NamedTuple, Optional

from .matrices import IntMatrix


class Edge(NamedTuple):
    eid: str
    src: str
    rng: str


class GraphTooLarge(ValueError):
    """Raised when a graph exceeds the size guard of a combinatorial search."""


def _check_id(kind: str, value: str) -> None:
    if not value or any(c.isspace() for c in value) or "#" in value:
        raise ValueError(f"bad {kind} id {value!r}: ids are nonempty, without whitespace or '#'")


@dataclass(frozen=True)
class DirectedGraph:
    """A finite directed multigraph with ordered vertices and edges."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    name: str = "G"

    def __post_init__(self) -> None:
        _check_id("graph", self.name)
        seen_v = set()
        for v in self.vertices:
            _check_id("vertex", v)
            if v in seen_v:
                raise ValueError(f"duplicate vertex id {v!r}")
            seen_v.add(v)
        seen_e = set()
        for e in self.edges:
            _check_id("edge", e.eid)
            if e.eid in seen_e:
                raise ValueError(f"duplicate edge id {e.eid!r}")
            seen_e.add(e.eid)
            if e.src not in seen_v:
                raise ValueError(f"edge {e.eid!r} has unknown source {e.src!r}")
            if e.rng not in seen_v:
                raise ValueError(f"edge {e.eid!r} has unknown range {e.rng!r}")

    @classmethod
    def build(cls, name, vertices, edges) -> "DirectedGraph":
        """Build from iterables; edges are ``(eid, source, range)`` triples."""
        return cls(tuple(vertices), tuple(Edge(*e) for e in edges), name)

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_by_id(self) -> dict[str, Edge]:
        return {e.eid: e for e in self.edges}

    @cached_property
    def _out(self) -> dict[str, tuple[Edge, ...]]:
        buckets: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            buckets[e.src].append(e)
        return {v: tuple(es) for v, es in buckets.items()}

    @cached_property
    def _in(self) -> dict[str, tuple[Edge, ...]]:
        buckets: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            buckets[e.rng].append(e)
        return {v: tuple(es) for v, es in buckets.items()}

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        return self._out[v]

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        return self._in[v]

    def source(self, eid: str) -> str:
        return self.edge_by_id[eid].src

    def range_of(self, eid: str) -> str:
        return self.edge_by_id[eid].rng


@dataclass(frozen=True)
class Path:
    """A composable edge word ``e1 e2 ... en`` of length >= 1."""

    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if not self.edges:
            raise ValueError("a path has length at least one")
        for a, b in zip(self.edges, self.edges[1:]):
            if a.src != b.rng:
                raise ValueError(f"edges {a.eid!r} and {b.eid!r} do not compose")

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(e.eid for e in self.edges)

    @property
    def rng(self) -> str:
        return self.edges[0].rng

    @property
    def src(self) -> str:
        return self.edges[-1].src


def adjacency_matrix(g: DirectedGraph) -> IntMatrix:
    """Adjacency matrix with ``A[i][j]`` counting edges from ``v_i`` to ``v_j``."""
    if not g.vertices:
        raise ValueError("adjacency matrix of an empty vertex set is undefined")
    idx = g.vertex_index
    grid = [[0] * len(g.vertices) for _ in g.vertices]
    for e in g.edges:
        grid[idx[e.src]][idx[e.rng]] += 1
    return IntMatrix.from_rows(grid)


def iter_paths(g: DirectedGraph, n: int) -> Iterator[tuple[Edge, ...]]:
    if n < 1:
        raise ValueError("path length must be at least 1")

    def extend(prefix: tuple[Edge, ...]) -> Iterator[tuple[Edge, ...]]:
        if len(prefix) == n:
            yield prefix
            return
        for e in g.in_edges(prefix[-1].src):
            yield from extend(prefix + (e,))

    for e in g.edges:
        yield from extend((e,))


def paths(g: DirectedGraph, n: int) -> list[Path]:
    """All paths of length ``n``, lexicographically in the graph's edge order."""
    return [Path(p) for p in iter_paths(g, n)]


def path_id(ids: tuple[str, ...]) -> str:
    return ".".join(ids)


def pair_id(left: str, right: str) -> str:
    return f"({left},{right})"


def power_graph(g: DirectedGraph, n: int) -> DirectedGraph:
    """The n-th power graph: same vertices, edges are paths of length ``n``.

    Satisfies ``adjacency(power_graph(g, n)) == adjacency(g) ** n``.
    """
    if n < 1:
        raise ValueError("power must be at least 1")
    edges = [
        Edge(path_id(tuple(e.eid for e in p)), p[-1].src, p[0].rng) for p in iter_paths(g, n)
    ]
    return DirectedGraph(g.vertices, tuple(edges), f"{g.name}.pow{n}")


def dual_graph(g: DirectedGraph) -> DirectedGraph:
    """The dual graph: vertices are edges, edges are composable pairs.

    A pair ``(e1, e2)`` with ``s(e1) = r(e2)`` becomes an edge from ``e2``
    to ``e1``, so length-two paths of ``g`` become single edges.
    """
    vertices = tuple(e.eid for e in g.edges)
    edges = tuple(
        Edge(pair_id(p[0].eid, p[1].eid), p[1].eid, p[0].eid) for p in iter_paths(g, 2)
    )
    return DirectedGraph(vertices, edges, f"{g.name}.dual")


def reverse_graph(g: DirectedGraph) -> DirectedGraph:
    """Swap source and range of every edge, keeping ids and order."""
    return DirectedGraph(
        g.vertices, tuple(Edge(e.eid, e.rng, e.src) for e in g.edges), f"{g.name}.rev"
    )


def singular_vertices(g: DirectedGraph) -> frozenset[str]:
    """Vertices receiving no edge (the complement of the image of the range map)."""
    received = {e.rng for e in g.edges}
    return frozenset(v for v in g.vertices if v not in received)


def is_regular(g: DirectedGraph) -> bool:
    """True when every vertex receives at least one edge."""
    return not singular_vertices(g)


ISO_SIZE_LIMIT = 40


def _vertex_signature(g: DirectedGraph, v: str) -> tuple[int, int, int]:
    loops = sum(1 for e in g.out_edges(v) if e.rng == v)
    return (len(g.out_edges(v)), len(g.in_edges(v)), loops)


def _edge_counts(g: DirectedGraph) -> dict[tuple[str, str], int]:
    counts: dict[tuple[str, str], int] = {}
    for e in g.edges:
        counts[(e.src, e.rng)] = counts.get((e.src, e.rng), 0) + 1
    return counts


def are_isomorphic(
    g: DirectedGraph, h: DirectedGraph, limit: int = ISO_SIZE_LIMIT
) -> Optional[tuple[dict[str, str], dict[str, str]]]:
    """Search for a graph isomorphism, returning ``(vertex_map, edge_map)`` or ``None``.

    The maps ``mu`` (on vertices) and ``nu`` (on edges) intertwine sources and
    ranges: ``mu(s(e)) = s(nu(e))`` and ``mu(r(e)) = r(nu(e))`` for every edge.
    Backtracking over vertex images with degree-signature pruning; intended
    for small graphs only.

    Raises :class:`GraphTooLarge` when ``|vertices| + |edges|`` exceeds
    ``limit`` in either graph, rather than silently grinding.
    """
    for graph in (g, h):
        size = len(graph.vertices) + len(graph.edges)
        if size > limit:
            raise GraphTooLarge(
                f"graph {graph.name!r} too large for isomorphism search: "
                f"{size} > limit {limit}"
            )
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return None
    sig_g = {v: _vertex_signature(g, v) for v in g.vertices}
    sig_h = {v: _vertex_signature(h, v) for v in h.vertices}
    if sorted(sig_g.values()) != sorted(sig_h.values()):
        return None
    counts_g = _edge_counts(g)
    counts_h = _edge_counts(h)

    mu: dict[str, str] = {}
    used: set[str] = set()

    def feasible(v: str, w: str) -> bool:
        if sig_g[v] != sig_h[w]:
            return False
        for u, x in mu.items():
            if counts_g.get((v, u), 0) != counts_h.get((w, x), 0):
                return False
            if counts_g.get((u, v), 0) != counts_h.get((x, w), 0):
                return False
        return counts_g.get((v, v), 0) == counts_h.get((w, w), 0)

    def assign(k: int) -> bool:
        if k == len(g.vertices):
            return True
        v = g.vertices[k]
        for w in h.vertices:
            if w in used or not feasible(v, w):
                continue
            mu[v] = w
            used.add(w)
            if assign(k + 1):
                return True
            del mu[v]
            used.discard(w)
        return False

    if not assign(0):
        return None

    # Pair up parallel edges deterministically within each endpoint class.
    buckets: dict[tuple[str, str], list[Edge]] = {}
    for e in h.edges:
        buckets.setdefault((e.src, e.rng), []).append(e)
    nu: dict[str, str] = {}
    for e in g.edges:
        nu[e.eid] = buckets[(mu[e.src], mu[e.rng])].pop(0).eid
    return dict(mu), nu
