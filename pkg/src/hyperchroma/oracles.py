"""Exact (exponential-time) chromatic index and list chromatic index for small
hypergraphs, used to check the heuristic colorers."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from hyperchroma.hypergraph import Hypergraph, build_line_graph

DEFAULT_CAP = 16
DEFAULT_LIST_CAP = 8

Adjacency = Sequence[frozenset[int]]


class OracleRefused(ValueError):
    """The instance is larger than the oracle's edge cap."""


def _adjacency(h: Hypergraph) -> list[frozenset[int]]:
    return [frozenset(a) for a in build_line_graph(h).adjacency]


def max_clique(adj: Adjacency) -> list[int]:
    best: list[int] = []

    def expand(clique: list[int], cand: set[int]) -> None:
        nonlocal best
        if len(clique) > len(best):
            best = list(clique)
        for v in sorted(cand):
            if len(clique) + len(cand) <= len(best):
                return
            expand(clique + [v], cand & adj[v])
            cand = cand - {v}

    expand([], set(range(len(adj))))
    return best


def _dsatur_upper(adj: Adjacency) -> list[int]:
    n = len(adj)
    color = [-1] * n
    for _ in range(n):
        v = max(
            (u for u in range(n) if color[u] < 0),
            key=lambda u: (len({color[w] for w in adj[u] if color[w] >= 0}), len(adj[u]), -u),
        )
        taken = {color[w] for w in adj[v]}
        c = 0
        while c in taken:
            c += 1
        color[v] = c
    return color


def _k_color(adj: Adjacency, k: int, seed_clique: list[int]) -> list[int] | None:
    """Backtracking k-coloring; the clique is precolored 0..|clique|-1 to break
    color symmetry, and new colors are opened one at a time."""
    n = len(adj)
    color = [-1] * n
    for c, v in enumerate(seed_clique):
        color[v] = c

    def rec(done: int, used: int) -> bool:
        if done == n:
            return True
        v = max(
            (u for u in range(n) if color[u] < 0),
            key=lambda u: (len({color[w] for w in adj[u] if color[w] >= 0}), len(adj[u]), -u),
        )
        taken = {color[w] for w in adj[v]}
        for c in range(min(k, used + 1)):
            if c in taken:
                continue
            color[v] = c
            if rec(done + 1, max(used, c + 1)):
                return True
        color[v] = -1
        return False

    return list(color) if rec(len(seed_clique), len(seed_clique)) else None


def chromatic_number(adj: Adjacency) -> tuple[int, list[int]]:
    if not adj:
        return 0, []
    clique = max_clique(adj)
    upper = _dsatur_upper(adj)
    hi = max(upper) + 1
    for k in range(len(clique), hi):
        witness = _k_color(adj, k, clique)
        if witness is not None:
            return k, witness
    return hi, upper


def brute_force_chromatic_index(h: Hypergraph, cap: int = DEFAULT_CAP) -> tuple[int, dict[int, int]]:
    """Exact q(H) with an optimal coloring as witness."""
    if h.m > cap:
        raise OracleRefused(f"{h.m} edges exceeds the oracle cap of {cap}")
    k, witness = chromatic_number(_adjacency(h))
    return k, dict(enumerate(witness))


def list_colorable(adj: Adjacency, lists: Sequence[Sequence[int]]) -> dict[int, int] | None:
    n = len(adj)
    color: dict[int, int] = {}

    def rec() -> bool:
        if len(color) == n:
            return True
        best, opts = -1, None
        for u in range(n):
            if u in color:
                continue
            taken = {color[w] for w in adj[u] if w in color}
            avail = [c for c in lists[u] if c not in taken]
            if opts is None or len(avail) < len(opts):
                best, opts = u, avail
                if not avail:
                    return False
        for c in opts:
            color[best] = c
            if rec():
                return True
        del color[best]
        return False

    return dict(color) if rec() else None


def _core(adj: Adjacency, q: int, alive: set[int]) -> set[int]:
    """Drop vertices of degree < q until none remain; they can always be colored last."""
    alive = set(alive)
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            if len(adj[v] & alive) < q:
                alive.discard(v)
                changed = True
    return alive


def _connected(adj: Adjacency, verts: set[int]) -> bool:
    start = min(verts)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v] & verts:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == verts


def _tight_bad_assignment(adj: Adjacency, verts: list[int], q: int) -> dict[int, list[int]] | None:
    """Search for size-q lists on ``verts`` with no proper list coloring, where
    every color of every list also occurs in a neighbor's list.

    Lists are chosen vertex by vertex. Colors are introduced in canonical
    order, and colors held by the same set of vertices are interchangeable, so
    only how many are taken from each such group matters. Alongside, the
    proper colorings of the prefix are kept (projected to vertices that still
    have unlisted neighbors). A branch is abandoned once one of them extends to
    every completion, i.e. the remaining vertices peel off with more free
    colors than remaining neighbors.
    """
    vs = set(verts)
    order = [max(verts, key=lambda v: (len(adj[v] & vs), -v))]
    while len(order) < len(verts):
        placed = set(order)
        frontier = [w for w in sorted(vs - placed) if adj[w] & placed]
        order.append(max(frontier, key=lambda w: (len(adj[w] & placed), len(adj[w] & vs), -w)))
    pos = {v: i for i, v in enumerate(order)}
    k = len(order)
    nbrs = [sorted(pos[w] for w in adj[v] if w in vs) for v in order]
    earlier = [[j for j in nbrs[i] if j < i] for i in range(k)]
    last_nbr = [max(nbrs[i]) for i in range(k)]

    lists: list[list[int]] = [[] for _ in range(k)]
    holders: list[set[int]] = []  # holders[c] = positions whose list contains c
    unwitnessed: list[set[int]] = [set() for _ in range(k)]

    def groups() -> list[list[int]]:
        by_key: dict[frozenset[int], list[int]] = {}
        for c, hs in enumerate(holders):
            by_key.setdefault(frozenset(hs), []).append(c)
        return sorted(by_key.values())

    def choices(gs: list[list[int]], need: int, allow_fresh: bool):
        # counts taken per group, most reuse first; the rest are fresh colors
        def rec(g: int, left: int):
            if g == len(gs):
                if left == 0 or allow_fresh:
                    yield []
                return
            for take in range(min(left, len(gs[g])), -1, -1):
                for rest in rec(g + 1, left - take):
                    yield [take] + rest

        yield from rec(0, need)

    def extends_always(i: int, phi: tuple[int, ...]) -> bool:
        rest = set(range(i + 1, k))
        free = {j: q - len({phi[u] for u in earlier[j] if u <= i}) for j in rest}
        changed = True
        while rest and changed:
            changed = False
            for j in sorted(rest):
                if free[j] > sum(1 for u in nbrs[j] if u in rest):
                    rest.discard(j)
                    changed = True
        return not rest

    def search(i: int, states: set[tuple[int, ...]]) -> bool:
        if i == k:
            return not states
        allow_fresh = last_nbr[i] > i
        gs = groups()
        for counts in choices(gs, q, allow_fresh):
            pal = [c for g, t in zip(gs, counts) for c in g[:t]]
            start = len(holders)
            fresh = q - len(pal)
            pal += range(start, start + fresh)
            holders.extend(set() for _ in range(fresh))
            for c in pal:
                holders[c].add(i)
            lists[i] = pal
            pal_set = set(pal)
            saved = {}
            seen = set()
            for j in earlier[i]:
                seen.update(lists[j])
                saved[j] = set(unwitnessed[j])
                unwitnessed[j] -= pal_set
            unwitnessed[i] = pal_set - seen
            ok = all(
                len(unwitnessed[u]) <= q * sum(1 for j in nbrs[u] if j > i)
                for u in [*saved, i]
            )
            if ok:
                nxt: set[tuple[int, ...]] = set()
                for phi in states:
                    taken = {phi[j] for j in earlier[i]}
                    for c in pal:
                        if c not in taken:
                            ext = phi + (c,)
                            # forget colors of vertices with no neighbors beyond i
                            nxt.add(tuple(col if last_nbr[j] > i else -1 for j, col in enumerate(ext)))
                if not nxt:
                    # the prefix alone is already uncolorable
                    for j in range(i + 1, k):
                        lists[j] = list(range(len(holders) + q * j, len(holders) + q * (j + 1)))
                    return True
                if not any(extends_always(i, phi) for phi in nxt) and search(i + 1, nxt):
                    return True
            for j, saved_set in saved.items():
                unwitnessed[j] = saved_set
            for c in pal:
                holders[c].discard(i)
            del holders[start:]
            lists[i] = []
        return False

    if search(0, {()}):
        return {order[i]: list(lists[i]) for i in range(k)}
    return None


def _components(adj: Adjacency, verts: set[int]) -> list[list[int]]:
    left = set(verts)
    out = []
    while left:
        start = min(left)
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v] & left:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        left -= comp
        out.append(sorted(comp))
    return out


def alon_tarsi_certifies(adj: Adjacency, verts: Sequence[int], q: int) -> bool:
    """True if the graph polynomial prod_{uv in E} (x_u - x_v) of the induced
    subgraph has a nonzero monomial with every exponent below q, which makes
    the subgraph q-choosable (Combinatorial Nullstellensatz). False is
    inconclusive.

    Exponents never decrease during expansion, so monomials reaching q are
    dropped as soon as they appear.
    """
    idx = {v: i for i, v in enumerate(verts)}
    edges = sorted((idx[u], idx[w]) for u in verts for w in adj[u] if w in idx and idx[u] < idx[w])
    poly: dict[tuple[int, ...], int] = {(0,) * len(verts): 1}
    for a, b in edges:
        nxt: dict[tuple[int, ...], int] = {}
        for mono, coef in poly.items():
            if mono[a] + 1 < q:
                m = mono[:a] + (mono[a] + 1,) + mono[a + 1 :]
                nxt[m] = nxt.get(m, 0) + coef
            if mono[b] + 1 < q:
                m = mono[:b] + (mono[b] + 1,) + mono[b + 1 :]
                nxt[m] = nxt.get(m, 0) - coef
        poly = {m: c for m, c in nxt.items() if c}
        if not poly:
            return False
    return True


def find_bad_list_assignment(adj: Adjacency, q: int) -> dict[int, list[int]] | None:
    """A size-q list assignment admitting no proper coloring, or None if the
    graph is q-choosable. Exact.

    A bad assignment can be shrunk (drop vertices of degree < q, or holding a
    color absent from all neighbor lists) to one on a connected induced
    subgraph of minimum degree >= q where every listed color recurs at a
    neighbor; those subgraphs are searched smallest first.
    """
    if q <= 0:
        return {v: [] for v in range(len(adj))} if adj else None
    core = _core(adj, q, set(range(len(adj))))
    if all(alon_tarsi_certifies(adj, comp, q) for comp in _components(adj, core)):
        return None
    for size in range(q + 1, len(core) + 1):
        for sub in combinations(sorted(core), size):
            s = set(sub)
            if any(len(adj[v] & s) < q for v in s) or not _connected(adj, s):
                continue
            bad = _tight_bad_assignment(adj, list(sub), q)
            if bad is not None:
                top = max(c for pal in bad.values() for c in pal) + 1
                for v in range(len(adj)):
                    if v not in bad:
                        bad[v] = list(range(top, top + q))
                        top += q
                return dict(sorted(bad.items()))
    return None


def brute_force_list_chromatic_index(h: Hypergraph, cap: int = DEFAULT_LIST_CAP) -> int:
    """Exact q_list(H): the least Q such that every assignment of Q-color lists
    to the edges admits a proper coloring."""
    if h.m > cap:
        raise OracleRefused(f"{h.m} edges exceeds the list oracle cap of {cap}")
    adj = _adjacency(h)
    if not adj:
        return 0
    q, _ = chromatic_number(adj)
    while find_bad_list_assignment(adj, q) is not None:
        q += 1
    return q
