from itertools import combinations

import pytest

from hyperchroma.hypergraph import Hypergraph
from hyperchroma.instances import projective_plane


def grid(rows: int, cols: int) -> Hypergraph:
    """Rows and columns of a rows x cols grid; its line graph is K_{rows,cols}."""
    r = [tuple(range(i * cols, (i + 1) * cols)) for i in range(rows)]
    c = [tuple(range(j, rows * cols, cols)) for j in range(cols)]
    return Hypergraph(rows * cols, tuple(r + c))


def from_graph(k: int, graph_edges) -> Hypergraph:
    """A linear hypergraph whose line graph is the given graph on k nodes.

    Hypergraph vertices are the graph's edges plus one private vertex per node,
    and hyperedge v collects the graph edges at v.
    """
    graph_edges = sorted(tuple(sorted(e)) for e in graph_edges)
    m = len(graph_edges)
    edges = []
    for v in range(k):
        e = [idx for idx, ge in enumerate(graph_edges) if v in ge]
        e.append(m + v)
        edges.append(tuple(e))
    return Hypergraph(m + k, tuple(edges))


def brute_triangles(h: Hypergraph):
    """Exhaustive triple enumeration straight from the edge sets."""
    t1 = [0] * h.m
    t2 = [0] * h.m
    sets = [set(e) for e in h.edges]
    for a, b, c in combinations(range(h.m), 3):
        ab, ac, bc = sets[a] & sets[b], sets[a] & sets[c], sets[b] & sets[c]
        if not (ab and ac and bc):
            continue
        counts = t1 if ab == ac == bc else t2
        for e in (a, b, c):
            counts[e] += 1
    return t1, t2


@pytest.fixture
def fano() -> Hypergraph:
    return projective_plane(2)


@pytest.fixture
def plane3() -> Hypergraph:
    return projective_plane(3)


@pytest.fixture
def star3() -> Hypergraph:
    return Hypergraph(7, ((0, 1, 2), (0, 3, 4), (0, 5, 6)))
