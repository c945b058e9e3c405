"""List edge coloring of linear hypergraphs.

Colorers work on the line graph: two edges conflict iff they share a vertex.
Palettes map edge id -> list of admissible colors. A colorer either returns an
:class:`EdgeColoring` that has already been verified against its palettes, or
raises :class:`ColoringFailure` describing where it got stuck.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable

from hyperchroma import __version__
from hyperchroma.hypergraph import (
    Hypergraph,
    LineGraph,
    build_line_graph,
    max_rank,
    min_rank,
    partition_dyadic,
    truncated_log,
    validate_linear,
)

Palettes = dict[int, list[int]]

ORDER_POLICIES = ("degree", "id", "random", "saturation")


@dataclass
class EdgeColoring:
    colors: dict[int, int]
    scope: frozenset[int]

    def colors_used(self) -> int:
        return len(set(self.colors.values()))

    def is_total(self) -> bool:
        return set(self.colors) == set(self.scope)


@dataclass
class ColoringReport:
    ok: bool
    conflicts: list[tuple[int, int, int, int]] = field(default_factory=list)
    off_palette: list[tuple[int, int]] = field(default_factory=list)
    out_of_scope: list[int] = field(default_factory=list)

    def messages(self) -> list[str]:
        out = [f"edges {a} and {b} both have color {c} at vertex {v}" for a, b, v, c in self.conflicts]
        out += [f"edge {e}: color {c} not in its palette" for e, c in self.off_palette]
        out += [f"edge {e}: not an edge of the hypergraph" for e in self.out_of_scope]
        return out


class ColoringFailure(Exception):
    """A colorer could not finish. Carries enough context to tabulate failures."""

    def __init__(
        self,
        message: str,
        *,
        phase: str = "greedy",
        edge: int | None = None,
        palette: list[int] | None = None,
        blocked: list[int] | None = None,
        class_index: int | None = None,
    ):
        super().__init__(message)
        self.phase = phase
        self.edge = edge
        self.palette = palette or []
        self.blocked = blocked or []
        self.class_index = class_index

    def as_dict(self) -> dict:
        return {
            "phase": self.phase,
            "message": str(self),
            "edge": self.edge,
            "palette_size": len(self.palette),
            "blocked": len(self.blocked),
            "class_index": self.class_index,
        }


class SplitFailure(ColoringFailure):
    def __init__(self, message: str, *, edge: int, class_index: int, size: int, threshold: float, attempts: int):
        super().__init__(message, phase="split", edge=edge, class_index=class_index)
        self.size = size
        self.threshold = threshold
        self.attempts = attempts

    def as_dict(self) -> dict:
        d = super().as_dict()
        d.update(size=self.size, threshold=self.threshold, attempts=self.attempts)
        return d


def verify_coloring(
    h: Hypergraph,
    coloring: EdgeColoring | dict[int, int],
    palettes: Palettes | None = None,
) -> ColoringReport:
    """Check properness on the colored edges and, if given, palette membership."""
    colors = coloring.colors if isinstance(coloring, EdgeColoring) else coloring
    rep = ColoringReport(ok=True)
    rep.out_of_scope = sorted(e for e in colors if not (0 <= e < h.m))
    at_vertex: dict[tuple[int, int], int] = {}
    for e in sorted(colors):
        if not (0 <= e < h.m):
            continue
        c = colors[e]
        if palettes is not None and c not in palettes.get(e, ()):
            rep.off_palette.append((e, c))
        for v in h.edges[e]:
            other = at_vertex.setdefault((v, c), e)
            if other != e:
                rep.conflicts.append((other, e, v, c))
    rep.ok = not (rep.conflicts or rep.off_palette or rep.out_of_scope)
    return rep


def _check(h: Hypergraph, colors: dict[int, int], palettes: Palettes) -> None:
    rep = verify_coloring(h, colors, palettes)
    if not rep.ok:
        raise AssertionError("internal error: colorer produced an invalid coloring: " + "; ".join(rep.messages()[:5]))


def _order(scope: list[int], lg: LineGraph, policy: str, seed: int | None) -> list[int]:
    if policy == "id":
        return sorted(scope)
    if policy == "random":
        out = sorted(scope)
        random.Random(seed).shuffle(out)
        return out
    inside = set(scope)
    deg = {e: len(inside.intersection(lg.adjacency[e])) for e in scope}
    return sorted(scope, key=lambda e: (-deg[e], e))


def greedy_list_color(
    h: Hypergraph,
    scope: Iterable[int],
    palettes: Palettes,
    order: str = "degree",
    seed: int | None = None,
    lg: LineGraph | None = None,
) -> EdgeColoring:
    """Color ``scope`` one edge at a time with the smallest palette color not
    taken by an already-colored neighbor.

    ``order`` is one of ``degree`` (descending degree inside the scope, ties by
    id), ``id``, ``random`` (shuffled by ``seed``) or ``saturation`` (always the
    edge with the fewest remaining palette colors next, DSATUR style).
    """
    if order not in ORDER_POLICIES:
        raise ValueError(f"unknown order policy {order!r}; expected one of {ORDER_POLICIES}")
    if lg is None:
        lg = build_line_graph(h)
    scope_list = sorted(set(scope))
    missing = [e for e in scope_list if e not in palettes]
    if missing:
        raise ValueError(f"edges without a palette: {missing[:10]}")
    inside = set(scope_list)
    colors: dict[int, int] = {}

    def pick(e: int) -> int:
        taken = {colors[f] for f in lg.adjacency[e] if f in colors}
        for c in sorted(palettes[e]):
            if c not in taken:
                return c
        raise ColoringFailure(
            f"edge {e}: all {len(palettes[e])} palette colors are taken by neighbors",
            edge=e,
            palette=list(palettes[e]),
            blocked=sorted(taken & set(palettes[e])),
        )

    if order == "saturation":
        pal_sets = {e: set(palettes[e]) for e in scope_list}
        remaining = {e: len(pal_sets[e]) for e in scope_list}
        deg = {e: len(inside.intersection(lg.adjacency[e])) for e in scope_list}
        blocked: dict[int, set[int]] = {e: set() for e in scope_list}
        uncolored = set(scope_list)
        while uncolored:
            e = min(uncolored, key=lambda f: (remaining[f], -deg[f], f))
            c = pick(e)
            colors[e] = c
            uncolored.discard(e)
            for f in lg.adjacency[e]:
                if f in uncolored and c in pal_sets[f] and c not in blocked[f]:
                    blocked[f].add(c)
                    remaining[f] -= 1
    else:
        for e in _order(scope_list, lg, order, seed):
            colors[e] = pick(e)

    _check(h, colors, palettes)
    return EdgeColoring(colors, frozenset(scope_list))


@dataclass
class ResidualRun:
    coloring: EdgeColoring
    contacts: dict[int, int]
    residual_sizes: dict[int, int]
    contact_bound: float

    @property
    def min_residual(self) -> int | None:
        return min(self.residual_sizes.values(), default=None)


def color_with_residuals(
    h: Hypergraph,
    e1: Iterable[int],
    e2: Iterable[int],
    palettes: Palettes,
    order: str = "degree",
    seed: int | None = None,
    lg: LineGraph | None = None,
    e2_coloring: EdgeColoring | None = None,
) -> ResidualRun:
    """Color E2 first, then color E1 from what E2 leaves over.

    Each E1 edge keeps only the palette colors not used by the E2 edges it
    meets. If ``e2_coloring`` is given it is taken as the E2 coloring instead
    of running the greedy colorer on E2.
    """
    e1 = sorted(set(e1))
    e2 = sorted(set(e2))
    if set(e1) & set(e2):
        raise ValueError("E1 and E2 must be disjoint")
    if lg is None:
        lg = build_line_graph(h)

    if e2_coloring is None:
        try:
            e2_coloring = greedy_list_color(h, e2, palettes, order=order, seed=seed, lg=lg)
        except ColoringFailure as exc:
            exc.phase = "E2"
            raise
    elif set(e2_coloring.colors) != set(e2):
        raise ValueError("e2_coloring must color exactly E2")

    in_e2 = set(e2)
    bound = 0.0
    if e1 and e2:
        bound = (h.n - 1) * max(len(h.edges[e]) for e in e1) / (min(len(h.edges[e]) for e in e2) - 1)

    residual: Palettes = {}
    contacts: dict[int, int] = {}
    for e in e1:
        touching = [f for f in lg.adjacency[e] if f in in_e2]
        contacts[e] = len(touching)
        if contacts[e] > bound:
            raise AssertionError(
                f"edge {e} meets {contacts[e]} E2 edges, above (n-1)P1/(rho2-1) = {bound}; input is not linear"
            )
        used = {e2_coloring.colors[f] for f in touching}
        residual[e] = [c for c in palettes[e] if c not in used]
        if len(residual[e]) < len(palettes[e]) - contacts[e]:
            raise AssertionError(f"edge {e}: residual palette shrank by more than its E2 contacts")

    try:
        c1 = greedy_list_color(h, e1, residual, order=order, seed=seed, lg=lg)
    except ColoringFailure as exc:
        exc.phase = "E1"
        raise

    colors = dict(e2_coloring.colors)
    colors.update(c1.colors)
    _check(h, colors, palettes)
    return ResidualRun(
        EdgeColoring(colors, frozenset(e1) | frozenset(e2)),
        contacts,
        {e: len(r) for e, r in residual.items()},
        bound,
    )


@dataclass(frozen=True)
class LayerSchedule:
    """Class indices base + s*stride, ..., base + stride, base, largest first."""

    base: int
    stride: int
    ceiling: int

    def __post_init__(self) -> None:
        if self.stride < 1:
            raise ValueError("stride must be >= 1")
        if self.base < 1:
            raise ValueError("base class index must be >= 1")

    @classmethod
    def for_n(cls, base: int, stride: int, n: int) -> "LayerSchedule":
        return cls(base, stride, max(0, math.ceil(math.log2(n))) if n > 1 else 0)

    @property
    def indices(self) -> list[int]:
        return [self.base + j * self.stride for j in range(self.ceiling, -1, -1)]


@dataclass
class LayeredRun:
    coloring: EdgeColoring
    schedule: LayerSchedule
    layer_minima: dict[int, int | None]
    contact_bounds: dict[int, float]


def layered_color(
    h: Hypergraph,
    partition: dict[int, list[int]],
    base: int,
    stride: int,
    palettes: Palettes,
    order: str = "degree",
    seed: int | None = None,
    lg: LineGraph | None = None,
) -> LayeredRun:
    """Color the classes A_base, A_base+stride, ... from the largest index down.

    Every layer is colored from residual palettes left by all higher layers,
    which are already colored by then.
    """
    if lg is None:
        lg = build_line_graph(h)
    schedule = LayerSchedule.for_n(base, stride, h.n)
    family = set(schedule.indices)
    stray = [c for c in partition if c >= base and (c - base) % stride == 0 and c not in family]
    if stray:
        raise ValueError(f"dyadic classes {stray} lie beyond the schedule ceiling")

    current = EdgeColoring({}, frozenset())
    minima: dict[int, int | None] = {}
    bounds: dict[int, float] = {}
    for idx in schedule.indices:
        layer = partition.get(idx, [])
        if not layer:
            continue
        try:
            run = color_with_residuals(
                h, layer, sorted(current.scope), palettes, order=order, seed=seed, lg=lg, e2_coloring=current
            )
        except ColoringFailure as exc:
            exc.class_index = idx
            raise
        current = run.coloring
        minima[idx] = run.min_residual
        bounds[idx] = run.contact_bound
        for higher in schedule.indices:
            if higher > idx and not set(partition.get(higher, [])) <= current.scope:
                raise AssertionError(f"class {higher} not colored before class {idx}")

    _check(h, current.colors, palettes)
    return LayeredRun(current, schedule, minima, bounds)


@dataclass(frozen=True)
class SplitParams:
    """How to split palettes into color classes.

    Either ``classes`` uniform classes, or (when ``p`` is set) two classes
    where a color lands in class 0 with probability ``p``. ``thresholds[c]``
    is the least acceptable class-c sub-palette size for every edge.
    """

    thresholds: tuple[float, ...]
    classes: int = 2
    p: float | None = None
    retries: int = 100
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "thresholds", tuple(self.thresholds))
        if self.p is not None:
            if not 0 < self.p < 1:
                raise ValueError(f"p must lie in (0, 1), got {self.p}")
            if self.classes != 2:
                raise ValueError("a probability split always has two classes")
        if self.classes < 1:
            raise ValueError("need at least one class")
        if len(self.thresholds) != self.classes:
            raise ValueError(f"expected {self.classes} thresholds, got {len(self.thresholds)}")
        if any(t <= 0 for t in self.thresholds):
            raise ValueError("thresholds must be positive")
        if self.retries < 1:
            raise ValueError("retry budget must be >= 1")


def split_palette_random(palettes: Palettes, params: SplitParams) -> list[Palettes]:
    """Randomly partition the color universe and restrict every palette to each part.

    The partition is resampled until every edge has at least the threshold
    number of colors in every class, or the retry budget runs out.
    """
    universe = sorted({c for pal in palettes.values() for c in pal})
    # edges often share one palette; split each distinct palette once
    distinct: dict[tuple[int, ...], list[int]] = {}
    for e in sorted(palettes):
        distinct.setdefault(tuple(palettes[e]), []).append(e)
    rng = random.Random(params.seed)
    worst: tuple[float, int, int, int] | None = None
    for _ in range(params.retries):
        if params.p is not None:
            assign = {c: 0 if rng.random() < params.p else 1 for c in universe}
        else:
            assign = {c: rng.randrange(params.classes) for c in universe}
        ok = True
        pieces: dict[tuple[int, ...], list[list[int]]] = {}
        for pal, owners in distinct.items():
            split: list[list[int]] = [[] for _ in range(params.classes)]
            for c in pal:
                split[assign[c]].append(c)
            pieces[pal] = split
            for k in range(params.classes):
                deficit = params.thresholds[k] - len(split[k])
                if deficit > 0:
                    ok = False
                    if worst is None or deficit > worst[0]:
                        worst = (deficit, owners[0], k, len(split[k]))
        if ok:
            return [
                {e: list(pieces[tuple(palettes[e])][k]) for e in sorted(palettes)}
                for k in range(params.classes)
            ]
    assert worst is not None
    _, e, k, size = worst
    raise SplitFailure(
        f"no split met the thresholds in {params.retries} attempts; worst: edge {e} got {size} "
        f"class-{k} colors, needs {params.thresholds[k]}",
        edge=e,
        class_index=k,
        size=size,
        threshold=params.thresholds[k],
        attempts=params.retries,
    )


def default_palette_size(n: int, i: int, eps: float) -> int:
    return math.ceil((1 + 3 * eps) * n / (i - 1))


def target_colors(n: int, i: int, eps: float) -> float:
    return (1 + eps) * n / (i - 1)


def stride_for(k: int) -> int:
    return max(1, math.ceil(math.log2(k)))


@dataclass
class PipelineRun:
    coloring: EdgeColoring
    report: dict


def full_pipeline(
    h: Hypergraph,
    i: int,
    eps: float,
    k: int,
    palettes: Palettes | None = None,
    palette_size: int | None = None,
    seed: int = 0,
    retries: int = 100,
    order: str = "degree",
    subclass_threshold: float | None = None,
) -> PipelineRun:
    """Color every edge of ``h`` by the two-class scheme.

    Colors are split at random into class I (probability
    1.5*n*eps / ((i-1)*Q)) and class II. Edges of rank below 2**k are colored
    greedily from class II. Class I is split again into ceil(log2 k) classes,
    and each residue family of large dyadic classes is colored layer by layer
    from its own part.

    Without ``palettes`` every edge gets ``range(Q)``.
    """
    if i < 2:
        raise ValueError("i must be >= 2")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if k < 1:
        raise ValueError("k must be >= 1")
    rep = validate_linear(h)
    if not rep.ok:
        raise ValueError("input is not a valid linear hypergraph: " + "; ".join(rep.messages()[:5]))
    n, m = h.n, h.m
    Q = palette_size if palette_size is not None else default_palette_size(n, i, eps)
    if palettes is None:
        palettes = {e: list(range(Q)) for e in range(m)}
    short = [e for e in range(m) if len(palettes.get(e, ())) < Q]
    if short:
        raise ValueError(f"edges {short[:10]} have palettes smaller than Q = {Q}")

    warnings: list[str] = []
    report: dict = {
        "version": __version__,
        "seed": seed,
        "params": {"i": i, "eps": eps, "k": k, "Q": Q, "retries": retries, "order": order},
        "n": n,
        "m": m,
    }
    if m == 0:
        report.update(colors_used=0, proper=True, target=target_colors(n, i, eps), warnings=[])
        return PipelineRun(EdgeColoring({}, frozenset()), report)

    rho, P = min_rank(h), max_rank(h)
    if rho < i:
        raise ValueError(f"minimum rank {rho} is below i = {i}")
    p_bound = math.sqrt(n * math.exp(-k))
    precondition = P <= p_bound
    if not precondition:
        warnings.append(f"max rank {P} exceeds sqrt(n e^-k) = {p_bound:.3f}; no size guarantee applies")
    warnings.append("minimum-n thresholds and the size constant behind the target are existential; they are not checked")

    lg = build_line_graph(h)
    seeds = random.Random(seed)
    split_seed, sub_seed, order_seed = (seeds.getrandbits(63) for _ in range(3))

    p = 1.5 * n * eps / ((i - 1) * Q)
    thr_big = n * eps / (i - 1)
    thr_small = target_colors(n, i, eps)
    if not 0 < p < 1:
        raise ValueError(f"palette size Q = {Q} too small: class-I probability {p} outside (0, 1)")
    class_one, class_two = split_palette_random(
        palettes, SplitParams((thr_big, thr_small), p=p, retries=retries, seed=split_seed)
    )

    partition = partition_dyadic(h)
    small = sorted(e for idx, ids in partition.items() if idx < k for e in ids)
    big = sorted(e for idx, ids in partition.items() if idx >= k for e in ids)
    x = stride_for(k)

    report["split"] = {
        "p": p,
        "thresholds": [thr_big, thr_small],
        "class_I_min": min(len(v) for v in class_one.values()),
        "class_II_min": min(len(v) for v in class_two.values()),
    }
    report["rho"], report["P"] = rho, P
    report["classes"] = {str(idx): len(ids) for idx, ids in partition.items()}

    try:
        small_col = greedy_list_color(h, small, {e: class_two[e] for e in small}, order=order, seed=order_seed, lg=lg)
    except ColoringFailure as exc:
        exc.phase = "small"
        raise

    colors = dict(small_col.colors)
    layered: dict[str, dict] = {}
    sub_min: list[int] = []
    if big:
        sub_thr = subclass_threshold
        if sub_thr is None:
            sub_thr = thr_big / (4 * truncated_log(k))
        big_pal = {e: class_one[e] for e in big}
        parts = split_palette_random(
            big_pal, SplitParams(tuple([sub_thr] * x), classes=x, retries=retries, seed=sub_seed)
        )
        sub_min = [min(len(v) for v in part.values()) for part in parts]
        for r in range(x):
            base = k + r
            fam = {idx: ids for idx, ids in partition.items() if idx >= k and (idx - base) % x == 0}
            if not fam:
                continue
            fam_edges = [e for ids in fam.values() for e in ids]
            try:
                run = layered_color(
                    h, fam, base, x, {e: parts[r][e] for e in fam_edges}, order=order, seed=order_seed, lg=lg
                )
            except ColoringFailure as exc:
                exc.phase = f"layered[{base}]"
                raise
            colors.update(run.coloring.colors)
            layered[str(base)] = {
                "indices": [idx for idx in run.schedule.indices if idx in fam],
                "layer_min_residual": {str(a): b for a, b in run.layer_minima.items()},
            }
        report["subsplit"] = {"classes": x, "threshold": sub_thr, "class_min": sub_min}
    report["layered"] = layered

    _check(h, colors, palettes)
    coloring = EdgeColoring(colors, frozenset(range(m)))
    assert coloring.is_total()
    report.update(
        colors_used=coloring.colors_used(),
        proper=True,
        target=thr_small,
        precondition_P_le_sqrt_n_exp_minus_k=precondition,
        small_edges=len(small),
        big_edges=len(big),
        warnings=warnings,
    )
    return PipelineRun(coloring, report)


__all__ = [
    "ColoringFailure",
    "ColoringReport",
    "EdgeColoring",
    "LayerSchedule",
    "LayeredRun",
    "ORDER_POLICIES",
    "Palettes",
    "PipelineRun",
    "ResidualRun",
    "SplitFailure",
    "SplitParams",
    "color_with_residuals",
    "default_palette_size",
    "full_pipeline",
    "greedy_list_color",
    "layered_color",
    "split_palette_random",
    "stride_for",
    "target_colors",
    "verify_coloring",
]
