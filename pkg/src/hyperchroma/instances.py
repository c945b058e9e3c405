"""Instance generators: projective planes over GF(p), padding, lower-bound
instances and random linear hypergraphs (greedy partial Steiner packings)."""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from hyperchroma.hypergraph import Hypergraph, validate_linear


class InfeasibleSpec(ValueError):
    def __init__(self, message: str, smallest_feasible_n: int | None = None):
        super().__init__(message)
        self.smallest_feasible_n = smallest_feasible_n


class ShortfallWarning(UserWarning):
    pass


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q < 4:
        return True
    if q % 2 == 0:
        return False
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


def smallest_prime_at_least(u: float) -> int:
    q = max(2, math.ceil(u))
    while not is_prime(q):
        q += 1
    return q


def _canonical_points(q: int) -> list[tuple[int, int, int]]:
    # nonzero vectors of GF(q)^3 scaled so the first nonzero coordinate is 1
    pts = [(1, a, b) for a in range(q) for b in range(q)]
    pts += [(0, 1, b) for b in range(q)]
    pts.append((0, 0, 1))
    return sorted(pts)


def projective_plane(q: int) -> Hypergraph:
    """PG(2, q) for prime q: points and lines are the 1- and 2-dimensional
    subspaces of GF(q)^3. A line with normal vector w holds the points x with
    w . x = 0 (mod q)."""
    if not is_prime(q):
        raise ValueError(f"order {q} is not prime (prime powers are not supported)")
    pts = _canonical_points(q)
    lines = []
    for w in pts:
        lines.append(tuple(idx for idx, x in enumerate(pts) if (w[0] * x[0] + w[1] * x[1] + w[2] * x[2]) % q == 0))
    h = Hypergraph(len(pts), tuple(sorted(lines)))
    _assert_plane(h, q)
    return h


def _assert_plane(h: Hypergraph, q: int) -> None:
    size = q * q + q + 1
    if h.n != size or h.m != size:
        raise AssertionError("wrong number of points or lines")
    if any(len(e) != q + 1 for e in h.edges):
        raise AssertionError("line of wrong rank")
    deg = [0] * h.n
    for e in h.edges:
        for v in e:
            deg[v] += 1
    if any(d != q + 1 for d in deg):
        raise AssertionError("point on wrong number of lines")
    sets = [set(e) for e in h.edges]
    for a, b in combinations(range(h.m), 2):
        if len(sets[a] & sets[b]) != 1:
            raise AssertionError(f"lines {a} and {b} do not meet in exactly one point")


def pad_isolated(h: Hypergraph, n_target: int) -> Hypergraph:
    if n_target < h.n:
        raise ValueError(f"cannot pad {h.n} vertices down to {n_target}")
    return Hypergraph(n_target, h.edges)


@dataclass(frozen=True)
class LowerBoundSpec:
    x: float
    delta: float
    n: int

    def __post_init__(self) -> None:
        if not 0 < self.x < 1:
            raise ValueError("x must lie in (0, 1)")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.n < 1:
            raise ValueError("n must be positive")


def _prime_for(nx: Fraction) -> int:
    """Smallest prime q with q >= sqrt(nx), decided in exact arithmetic."""
    q = max(2, math.isqrt(math.floor(nx)))
    while q * q < nx or not is_prime(q):
        q += 1
    return q


def _smallest_feasible_n(x: Fraction, n: int) -> int:
    # q(n') = q exactly when prev^2 < n'x <= q^2, with prev the prime before q
    prev, q = 0, 2
    while True:
        lo = max(n, q * q + q + 1, math.floor(Fraction(prev * prev) / x) + 1)
        if lo * x <= q * q:
            return lo
        prev, q = q, smallest_prime_at_least(q + 1)


def lower_bound_instance(spec: LowerBoundSpec) -> tuple[Hypergraph, dict]:
    """A projective plane of order q = smallest prime >= sqrt(nx), padded to n
    vertices, whose chromatic index q^2+q+1 exceeds xn."""
    x = Fraction(str(spec.x))
    nx = spec.n * x
    q = _prime_for(nx)
    size = q * q + q + 1
    if size > spec.n:
        best = _smallest_feasible_n(x, spec.n)
        raise InfeasibleSpec(
            f"q = {q} needs q^2+q+1 = {size} > n = {spec.n} vertices; smallest feasible n is {best}",
            smallest_feasible_n=best,
        )
    h = pad_isolated(projective_plane(q), spec.n)
    r = q + 1
    delta = Fraction(str(spec.delta))
    cert = {
        "x": spec.x,
        "delta": spec.delta,
        "n": spec.n,
        "u": math.sqrt(float(nx)),
        "xn": float(nx),
        "q": q,
        "r": r,
        "rho": r,
        "P": r,
        "points": size,
        "chromatic_index": size,
        # the line graph of a plane is complete, so q_list >= q(H) = q^2+q+1
        "q_list_lower_bound": size,
        "bound_exceeds_xn": size > nx,
        "r_ge_sqrt_xn": r * r >= nx,
        "r_le_1_plus_delta_sqrt_xn": r * r <= (1 + delta) ** 2 * nx,
        "claim": f"{size} > {float(nx):g}",
    }
    if not (cert["bound_exceeds_xn"] and cert["r_ge_sqrt_xn"]):
        raise AssertionError("certificate arithmetic failed")
    return h, cert


@dataclass(frozen=True)
class RandomLinearSpec:
    n: int
    r_min: int
    r_max: int
    target: int | None = None
    budget: int = 1000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.r_min < 2:
            raise ValueError("r_min must be >= 2")
        if self.r_max < self.r_min:
            raise ValueError("r_max must be >= r_min")
        if self.r_max > self.n:
            raise ValueError("r_max must be <= n")
        if self.budget < 1:
            raise ValueError("failure budget must be >= 1")
        if self.target is not None and self.target < 0:
            raise ValueError("target must be nonnegative")


def random_linear_hypergraph(spec: RandomLinearSpec) -> Hypergraph:
    """Random greedy packing of edges that pairwise share at most one vertex.

    Draws a uniform rank and a uniform vertex subset of that rank; keeps it if
    none of its vertex pairs is already covered. Stops at ``target`` edges or
    after ``budget`` consecutive rejections. Edges keep acceptance order.
    """
    rng = random.Random(spec.seed)
    # linked[v]: bitmask of vertices already sharing an edge with v
    linked = [0] * spec.n
    edges: list[tuple[int, ...]] = []
    fails = 0
    while (spec.target is None or len(edges) < spec.target) and fails < spec.budget:
        r = rng.randint(spec.r_min, spec.r_max)
        cand = tuple(sorted(rng.sample(range(spec.n), r)))
        mask = 0
        for v in cand:
            mask |= 1 << v
        if any(linked[v] & mask for v in cand):
            fails += 1
            continue
        for v in cand:
            linked[v] |= mask ^ (1 << v)
        edges.append(cand)
        fails = 0
    h = Hypergraph(spec.n, tuple(edges))
    if spec.target is not None and len(edges) < spec.target:
        warnings.warn(
            f"packed {len(edges)} of {spec.target} edges before {spec.budget} consecutive rejections",
            ShortfallWarning,
            stacklevel=2,
        )
    if not validate_linear(h).ok:
        raise AssertionError("generator produced a non-linear hypergraph")
    return h
