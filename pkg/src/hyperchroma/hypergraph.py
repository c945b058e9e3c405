"""Linear hypergraphs and the structural quantities used to color them.

A hypergraph is stored as a vertex count plus an ordered tuple of edges; edge
ids are positions in that tuple. Everything here is a pure function of its
inputs.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable

Edge = tuple[int, ...]


class NoEdgesError(ValueError):
    """Raised by rank/degree queries on a hypergraph without edges."""


@dataclass(frozen=True)
class Hypergraph:
    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        # canonical form: every edge sorted; duplicates are kept so that
        # validate_linear can report them
        object.__setattr__(self, "edges", tuple(tuple(sorted(e)) for e in self.edges))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        return cls(n, tuple(tuple(e) for e in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def ranks(self) -> list[int]:
        return [len(e) for e in self.edges]

    def incidence(self) -> dict[int, list[int]]:
        """Map each vertex to the ids of the edges containing it (ascending)."""
        inc: dict[int, list[int]] = defaultdict(list)
        for eid, e in enumerate(self.edges):
            for v in e:
                inc[v].append(eid)
        return dict(inc)

    def restrict(self, edge_ids: Iterable[int]) -> "Hypergraph":
        """The hypergraph H(E') on the same vertex set; edges renumbered in id order."""
        return Hypergraph(self.n, tuple(self.edges[e] for e in sorted(edge_ids)))


@dataclass
class ValidationReport:
    ok: bool
    bad_vertex_ids: list[tuple[int, list[int]]] = field(default_factory=list)
    duplicate_vertices: list[int] = field(default_factory=list)
    small_edges: list[int] = field(default_factory=list)
    duplicate_edges: list[tuple[int, int]] = field(default_factory=list)
    overlapping_pairs: list[tuple[int, int, tuple[int, ...]]] = field(default_factory=list)

    def messages(self) -> list[str]:
        out = []
        for eid, bad in self.bad_vertex_ids:
            out.append(f"edge {eid}: vertex ids out of range {bad}")
        for eid in self.duplicate_vertices:
            out.append(f"edge {eid}: repeated vertex")
        for eid in self.small_edges:
            out.append(f"edge {eid}: rank < 2")
        for a, b in self.duplicate_edges:
            out.append(f"edges {a} and {b} are identical")
        for a, b, shared in self.overlapping_pairs:
            out.append(f"edges {a} and {b} share {len(shared)} vertices {list(shared)}")
        return out


def validate_linear(h: Hypergraph) -> ValidationReport:
    """Check every invariant of a linear hypergraph and list all violations."""
    rep = ValidationReport(ok=True)
    for eid, e in enumerate(h.edges):
        bad = [v for v in e if not (0 <= v < h.n)]
        if bad:
            rep.bad_vertex_ids.append((eid, bad))
        if len(set(e)) != len(e):
            rep.duplicate_vertices.append(eid)
        if len(set(e)) < 2:
            rep.small_edges.append(eid)

    first_seen: dict[Edge, int] = {}
    for eid, e in enumerate(h.edges):
        if e in first_seen:
            rep.duplicate_edges.append((first_seen[e], eid))
        else:
            first_seen[e] = eid

    # every overlapping pair shares some vertex pair; bucket edges by vertex pair
    by_pair: dict[tuple[int, int], list[int]] = defaultdict(list)
    for eid, e in enumerate(h.edges):
        for pair in combinations(sorted(set(e)), 2):
            by_pair[pair].append(eid)
    dup = {pair for pair in rep.duplicate_edges}
    seen: set[tuple[int, int]] = set()
    for pair in sorted(by_pair):
        ids = by_pair[pair]
        for a, b in combinations(ids, 2):
            if (a, b) in seen or (a, b) in dup:
                continue
            seen.add((a, b))
            shared = tuple(sorted(set(h.edges[a]) & set(h.edges[b])))
            rep.overlapping_pairs.append((a, b, shared))
    rep.overlapping_pairs.sort()

    rep.ok = not (
        rep.bad_vertex_ids
        or rep.duplicate_vertices
        or rep.small_edges
        or rep.duplicate_edges
        or rep.overlapping_pairs
    )
    return rep


def min_rank(h: Hypergraph) -> int:
    if not h.edges:
        raise NoEdgesError("hypergraph has no edges")
    return min(h.ranks())


def max_rank(h: Hypergraph) -> int:
    if not h.edges:
        raise NoEdgesError("hypergraph has no edges")
    return max(h.ranks())


def degree_bound(h: Hypergraph) -> float:
    """Upper bound (n-1)/(rho-1) on the number of edges through any vertex."""
    return (h.n - 1) / (min_rank(h) - 1)


def vertex_degrees(h: Hypergraph) -> list[int]:
    deg = [0] * h.n
    for e in h.edges:
        for v in e:
            deg[v] += 1
    return deg


def max_vertex_degree(h: Hypergraph) -> int:
    """Largest number of edges through one vertex.

    In a linear hypergraph the edges at a vertex are otherwise disjoint, so
    this never exceeds (n-1)/(rho-1); a violation means ``h`` is not linear.
    """
    bound = degree_bound(h)
    d = max(vertex_degrees(h), default=0)
    if d > bound:
        raise ValueError(f"max degree {d} exceeds (n-1)/(rho-1) = {bound}; input is not linear")
    return d


@dataclass(frozen=True)
class LineGraph:
    """L(H): one node per hyperedge, adjacent iff the hyperedges meet.

    ``shared[(a, b)]`` (a < b) is the unique hypergraph vertex in both edges;
    it is computed on first use.
    """

    adjacency: tuple[tuple[int, ...], ...]
    edges: tuple[Edge, ...]

    @property
    def size(self) -> int:
        return len(self.adjacency)

    def degree(self, e: int) -> int:
        return len(self.adjacency[e])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    @cached_property
    def shared(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for a, nbrs in enumerate(self.adjacency):
            ea = set(self.edges[a])
            for b in nbrs:
                if b > a:
                    (v,) = ea.intersection(self.edges[b])
                    out[(a, b)] = v
        return out

    def meeting_point(self, a: int, b: int) -> int:
        return self.shared[(a, b) if a < b else (b, a)]


def build_line_graph(h: Hypergraph) -> LineGraph:
    """Line graph of a linear hypergraph (linearity is assumed, not checked;
    use validate_linear first on untrusted input)."""
    adj: list[set[int]] = [set() for _ in h.edges]
    for ids in h.incidence().values():
        for a in ids:
            adj[a].update(ids)
    for a, nbrs in enumerate(adj):
        nbrs.discard(a)
    return LineGraph(tuple(tuple(sorted(s)) for s in adj), h.edges)


@dataclass(frozen=True)
class TriangleStats:
    """Per-edge triangle counts in the line graph, split by shape.

    Type 1: three edges through one common vertex. Type 2: three edges
    meeting pairwise at three distinct vertices.
    """

    type1: tuple[int, ...]
    type2: tuple[int, ...]
    max_degree: int

    @property
    def total(self) -> tuple[int, ...]:
        return tuple(a + b for a, b in zip(self.type1, self.type2))

    @property
    def max_triangles(self) -> int:
        return max(self.total, default=0)


def count_triangles(h: Hypergraph, lg: LineGraph | None = None) -> TriangleStats:
    if lg is None:
        lg = build_line_graph(h)
    t1 = [0] * lg.size
    t2 = [0] * lg.size
    nbr = [set(a) for a in lg.adjacency]
    for a in range(lg.size):
        for b in lg.adjacency[a]:
            if b <= a:
                continue
            vab = lg.shared[(a, b)]
            for c in nbr[a] & nbr[b]:
                if c <= b:
                    continue
                if lg.shared[(a, c)] == vab and lg.shared[(b, c)] == vab:
                    counts = t1
                else:
                    counts = t2
                counts[a] += 1
                counts[b] += 1
                counts[c] += 1
    return TriangleStats(tuple(t1), tuple(t2), lg.max_degree())


def dyadic_index(rank: int) -> int:
    """The i with 2**i <= rank < 2**(i+1)."""
    if rank < 1:
        raise ValueError("rank must be positive")
    return rank.bit_length() - 1


def partition_dyadic(h: Hypergraph) -> dict[int, list[int]]:
    """Group edge ids into dyadic rank classes A_i, keyed by i (only nonempty classes)."""
    classes: dict[int, list[int]] = defaultdict(list)
    for eid, e in enumerate(h.edges):
        classes[dyadic_index(len(e))].append(eid)
    return dict(sorted(classes.items()))


def truncated_log(x: float) -> float:
    return math.log(x) if x >= math.e else 1.0
