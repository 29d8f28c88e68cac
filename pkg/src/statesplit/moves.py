"""In-splits and out-splits of finite directed graphs.

An in-split of ``g`` is a factorisation ``r = alpha . psi`` of the range map
through a new vertex set; an out-split factors the source map the same way.
Both are carried by the triple data (new vertex list, ``alpha`` from new
vertices onto old ones, ``psi`` from edges to new vertices).  The classical
single-vertex partition encoding compiles down to this general form.

The split graph of an in-split has edge set ``{(e, v) : s(e) = alpha(v)}``
with range ``psi(e)`` and source ``v``; dually for out-splits the edges are
``{(v, e) : alpha(v) = r(e)}`` with range ``v`` and source ``psi(e)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .graphs import DirectedGraph, Edge, dual_graph, is_regular, iter_paths, pair_id, power_graph, singular_vertices


class SpecError(ValueError):
    """Raised when split data fails validation; carries the violation list."""

    def __init__(self, message: str, violations: Sequence[str] = ()):
        super().__init__(message)
        self.violations = tuple(violations)


@dataclass(frozen=True, eq=True)
class InSplitSpec:
    """Range-map factorisation data ``(alpha, new vertex set, psi)``."""

    new_vertices: tuple[str, ...]
    alpha: Mapping[str, str]
    psi: Mapping[str, str]


@dataclass(frozen=True, eq=True)
class OutSplitSpec:
    """Source-map factorisation data ``(alpha, new vertex set, psi)``.

    ``allow_empty`` tolerates new vertices outside the image of ``psi``;
    these arise from empty partition classes and break surjectivity of the
    general form, so they are opt-in.
    """

    new_vertices: tuple[str, ...]
    alpha: Mapping[str, str]
    psi: Mapping[str, str]
    allow_empty: bool = False


def validate_in_split(g: DirectedGraph, spec: InSplitSpec) -> list[str]:
    """Check in-split conditions, returning one message per violation.

    An empty report means the spec is valid: ``alpha`` is a surjection of
    the new vertices onto the old, ``alpha . psi = r`` edge by edge, and
    ``alpha`` restricts to a bijection between the vertices missed by
    ``psi`` and the vertices missed by ``r``.
    """
    out: list[str] = []
    new_set = set(spec.new_vertices)
    if len(new_set) != len(spec.new_vertices):
        out.append("new-vertices-duplicated")
    if set(spec.alpha) != new_set:
        out.append("alpha-domain: must be defined on exactly the new vertices")
    else:
        if not set(spec.alpha.values()) <= set(g.vertices):
            out.append("alpha-range: hits unknown vertices")
        missing = sorted(set(g.vertices) - set(spec.alpha.values()))
        if missing:
            out.append(f"alpha-not-surjective: missing {' '.join(missing)}")
    edge_ids = {e.eid for e in g.edges}
    if set(spec.psi) != edge_ids:
        out.append("psi-domain: must be defined on exactly the edges")
        return out
    if not set(spec.psi.values()) <= new_set:
        out.append("psi-range: hits unknown new vertices")
        return out
    if set(spec.alpha) != new_set:
        return out
    for e in g.edges:
        if spec.alpha[spec.psi[e.eid]] != e.rng:
            out.append(
                f"alpha-psi-mismatch: edge {e.eid} has psi {spec.psi[e.eid]} "
                f"over {spec.alpha[spec.psi[e.eid]]} but range {e.rng}"
            )
    psi_image = set(spec.psi.values())
    new_singular = [v for v in spec.new_vertices if v not in psi_image]
    old_singular = singular_vertices(g)
    image = [spec.alpha[v] for v in new_singular]
    if len(set(image)) != len(image):
        out.append("singular-not-injective: alpha identifies two psi-singular vertices")
    if set(image) != old_singular:
        out.append(
            "singular-mismatch: psi-singular vertices map to "
            f"{{{' '.join(sorted(set(image)))}}} but the range map misses "
            f"{{{' '.join(sorted(old_singular))}}}"
        )
    return out


def validate_out_split(g: DirectedGraph, spec: OutSplitSpec) -> list[str]:
    """Check out-split conditions; empty report means valid.

    Requires ``alpha`` surjective, ``alpha . psi = s`` edge by edge, and
    ``psi`` surjective unless the spec opts into empty classes.
    """
    out: list[str] = []
    new_set = set(spec.new_vertices)
    if len(new_set) != len(spec.new_vertices):
        out.append("new-vertices-duplicated")
    if set(spec.alpha) != new_set:
        out.append("alpha-domain: must be defined on exactly the new vertices")
    else:
        if not set(spec.alpha.values()) <= set(g.vertices):
            out.append("alpha-range: hits unknown vertices")
        missing = sorted(set(g.vertices) - set(spec.alpha.values()))
        if missing:
            out.append(f"alpha-not-surjective: missing {' '.join(missing)}")
    edge_ids = {e.eid for e in g.edges}
    if set(spec.psi) != edge_ids:
        out.append("psi-domain: must be defined on exactly the edges")
        return out
    if not set(spec.psi.values()) <= new_set:
        out.append("psi-range: hits unknown new vertices")
        return out
    if set(spec.alpha) != new_set:
        return out
    for e in g.edges:
        if spec.alpha[spec.psi[e.eid]] != e.src:
            out.append(
                f"alpha-psi-mismatch: edge {e.eid} has psi {spec.psi[e.eid]} "
                f"over {spec.alpha[spec.psi[e.eid]]} but source {e.src}"
            )
    if not spec.allow_empty:
        missed = sorted(new_set - set(spec.psi.values()))
        if missed:
            out.append(f"psi-not-surjective: missing {' '.join(missed)}")
    return out


def _expanded_vertices(g: DirectedGraph, w: str, n: int) -> tuple[str, ...]:
    out: list[str] = []
    for v in g.vertices:
        if v == w:
            out.extend(f"{w}@{i}" for i in range(1, n + 1))
        else:
            out.append(f"{v}@1")
    return tuple(out)


def _check_partition(blocks: Sequence[Iterable[str]], whole: set[str], allow_empty: bool) -> list[set[str]]:
    sets = [set(b) for b in blocks]
    if not sets:
        raise SpecError("partition needs at least one class")
    seen: set[str] = set()
    for i, block in enumerate(sets, start=1):
        if not block and not allow_empty:
            raise SpecError(f"partition class {i} is empty")
        if block & seen:
            raise SpecError(f"partition class {i} overlaps an earlier class")
        if not block <= whole:
            extra = sorted(block - whole)
            raise SpecError(f"partition class {i} contains foreign edges: {' '.join(extra)}")
        seen |= block
    if seen != whole:
        missing = sorted(whole - seen)
        raise SpecError(f"partition misses edges: {' '.join(missing)}")
    return sets


def in_split_from_partition(
    g: DirectedGraph, w: str, partition: Sequence[Iterable[str]]
) -> InSplitSpec:
    """Compile a single-vertex partition of ``r^{-1}(w)`` to general form.

    New vertices keep the original order, with ``w`` expanded in place into
    one copy per partition class; every other vertex ``v`` becomes ``v@1``.
    """
    if w not in g.vertex_index:
        raise SpecError(f"unknown vertex {w!r}")
    incoming = {e.eid for e in g.in_edges(w)}
    if not incoming:
        raise SpecError(f"vertex {w!r} receives no edges, nothing to partition")
    blocks = _check_partition(partition, incoming, allow_empty=False)
    new_vertices = _expanded_vertices(g, w, len(blocks))
    alpha = {nv: nv.rsplit("@", 1)[0] for nv in new_vertices}
    block_of = {eid: i for i, block in enumerate(blocks, start=1) for eid in block}
    psi = {
        e.eid: f"{w}@{block_of[e.eid]}" if e.rng == w else f"{e.rng}@1" for e in g.edges
    }
    return InSplitSpec(new_vertices, alpha, psi)


def out_split_from_partition(
    g: DirectedGraph, w: str, partition: Sequence[Iterable[str]], allow_empty: bool = False
) -> OutSplitSpec:
    """Compile a single-vertex partition of ``s^{-1}(w)`` to general form."""
    if w not in g.vertex_index:
        raise SpecError(f"unknown vertex {w!r}")
    outgoing = {e.eid for e in g.out_edges(w)}
    if not outgoing:
        raise SpecError(f"vertex {w!r} emits no edges, nothing to partition")
    blocks = _check_partition(partition, outgoing, allow_empty=allow_empty)
    new_vertices = _expanded_vertices(g, w, len(blocks))
    alpha = {nv: nv.rsplit("@", 1)[0] for nv in new_vertices}
    block_of = {eid: i for i, block in enumerate(blocks, start=1) for eid in block}
    psi = {
        e.eid: f"{w}@{block_of[e.eid]}" if e.src == w else f"{e.src}@1" for e in g.edges
    }
    return OutSplitSpec(new_vertices, alpha, psi, allow_empty=allow_empty)


def identity_in_split(g: DirectedGraph) -> InSplitSpec:
    """The trivial factorisation ``(id, vertices, r)``; splitting by it relabels ``g``."""
    return InSplitSpec(
        g.vertices, {v: v for v in g.vertices}, {e.eid: e.rng for e in g.edges}
    )


def complete_in_split(g: DirectedGraph) -> InSplitSpec:
    """The maximal factorisation ``(r, edges, id)``; splitting by it yields the dual graph.

    Requires every vertex of ``g`` to receive an edge, else the new vertex
    set would acquire spurious singular points.
    """
    if not is_regular(g):
        missing = " ".join(sorted(singular_vertices(g)))
        raise SpecError(f"complete in-split needs every vertex to receive an edge; bare: {missing}")
    return InSplitSpec(
        tuple(e.eid for e in g.edges),
        {e.eid: e.rng for e in g.edges},
        {e.eid: e.eid for e in g.edges},
    )


def identity_out_split(g: DirectedGraph) -> OutSplitSpec:
    """The trivial source factorisation ``(id, vertices, s)``."""
    return OutSplitSpec(
        g.vertices, {v: v for v in g.vertices}, {e.eid: e.src for e in g.edges}
    )


def complete_out_split(g: DirectedGraph) -> OutSplitSpec:
    """The maximal source factorisation ``(s, edges, id)``; yields the dual graph."""
    emitting = {e.src for e in g.edges}
    bare = sorted(v for v in g.vertices if v not in emitting)
    if bare:
        raise SpecError(f"complete out-split needs every vertex to emit an edge; bare: {' '.join(bare)}")
    return OutSplitSpec(
        tuple(e.eid for e in g.edges),
        {e.eid: e.src for e in g.edges},
        {e.eid: e.eid for e in g.edges},
    )


def apply_in_split(g: DirectedGraph, spec: InSplitSpec) -> DirectedGraph:
    """The in-split graph: edges ``(e, v)`` with ``s(e) = alpha(v)``.

    The new edge ``(e, v)`` has range ``psi(e)`` and source ``v``; ids are
    the deterministic pair ids ``(e,v)``.
    """
    violations = validate_in_split(g, spec)
    if violations:
        raise SpecError("invalid in-split: " + "; ".join(violations), violations)
    edges = tuple(
        Edge(pair_id(e.eid, v), v, spec.psi[e.eid])
        for e in g.edges
        for v in spec.new_vertices
        if e.src == spec.alpha[v]
    )
    return DirectedGraph(spec.new_vertices, edges, f"{g.name}.insplit")


def apply_out_split(g: DirectedGraph, spec: OutSplitSpec) -> DirectedGraph:
    """The out-split graph: edges ``(v, e)`` with ``alpha(v) = r(e)``.

    The new edge ``(v, e)`` has range ``v`` and source ``psi(e)``.
    """
    violations = validate_out_split(g, spec)
    if violations:
        raise SpecError("invalid out-split: " + "; ".join(violations), violations)
    edges = tuple(
        Edge(pair_id(v, e.eid), spec.psi[e.eid], v)
        for v in spec.new_vertices
        for e in g.edges
        if spec.alpha[v] == e.rng
    )
    return DirectedGraph(spec.new_vertices, edges, f"{g.name}.outsplit")


def diamond_spec(g: DirectedGraph, spec: InSplitSpec) -> InSplitSpec:
    """The follow-up in-split of ``apply_in_split(g, spec)`` that lands on the dual.

    The data is ``(psi, old edge set, first-coordinate projection)``:
    splitting the split graph by it produces a graph isomorphic to
    ``dual_graph(g)``.  Requires ``g`` regular.
    """
    if not is_regular(g):
        missing = " ".join(sorted(singular_vertices(g)))
        raise SpecError(f"diamond construction needs a regular graph; bare: {missing}")
    violations = validate_in_split(g, spec)
    if violations:
        raise SpecError("invalid in-split: " + "; ".join(violations), violations)
    split = apply_in_split(g, spec)
    new_vertices = tuple(e.eid for e in g.edges)
    alpha = {e.eid: spec.psi[e.eid] for e in g.edges}
    psi = {pe.eid: _first_component(pe.eid) for pe in split.edges}
    return InSplitSpec(new_vertices, alpha, psi)


def _first_component(pid: str) -> str:
    # Inverse of pair_id on the first slot: "(left,right)" -> "left".
    if not (pid.startswith("(") and pid.endswith(")")):
        raise ValueError(f"not a pair id: {pid!r}")
    depth = 0
    for i, c in enumerate(pid):
        if c == "(":
            depth += 1
        elif c == ")":
            depth -= 1
        elif c == "," and depth == 1:
            return pid[1:i]
    raise ValueError(f"not a pair id: {pid!r}")


def compose_in_splits(
    g: DirectedGraph, specs: Sequence[InSplitSpec]
) -> tuple[int, InSplitSpec]:
    """Fold a chain of in-splits into a single in-split of the power graph.

    Stage ``k`` must be a valid in-split of the graph produced by stage
    ``k-1``.  With ``n = len(specs)`` the returned spec is an in-split of
    ``power_graph(g, n)`` whose split graph is isomorphic to the n-th power
    of the iterated split graph.
    """
    if not specs:
        raise SpecError("need at least one in-split to compose")
    if not is_regular(g):
        missing = " ".join(sorted(singular_vertices(g)))
        raise SpecError(f"composition needs a regular graph; bare: {missing}")
    n = len(specs)
    stage = g
    for k, spec in enumerate(specs, start=1):
        violations = validate_in_split(stage, spec)
        if violations:
            raise SpecError(
                f"stage {k} spec invalid for its graph: " + "; ".join(violations), violations
            )
        stage = apply_in_split(stage, spec)

    final_vertices = specs[-1].new_vertices

    def alpha_down(v: str) -> str:
        for spec in reversed(specs):
            v = spec.alpha[v]
        return v

    combined_alpha = {v: alpha_down(v) for v in final_vertices}
    combined_psi: dict[str, str] = {}
    for p in iter_paths(g, n):
        ids = [e.eid for e in p]
        key = path_id(tuple(ids))
        for k, spec in enumerate(specs):
            if k < n - 1:
                ids = [pair_id(ids[i], spec.psi[ids[i + 1]]) for i in range(len(ids) - 1)]
            else:
                combined_psi[key] = spec.psi[ids[0]]
    return n, InSplitSpec(final_vertices, combined_alpha, combined_psi)
