"""Acceptance gate. Each test checks one headline criterion at its stated
tolerance and prints a single PASS/FAIL line (visible without -s)."""

import json
import math
import os
import subprocess
import sys
import time
import warnings
from fractions import Fraction
from itertools import combinations

import pytest

from hyperchroma.coloring import (
    color_with_residuals,
    full_pipeline,
    greedy_list_color,
    SplitFailure,
    SplitParams,
    split_palette_random,
    verify_coloring,
)
from hyperchroma.hypergraph import (
    count_triangles,
    degree_bound,
    max_vertex_degree,
    vertex_degrees,
)
from hyperchroma.instances import (
    LowerBoundSpec,
    RandomLinearSpec,
    lower_bound_instance,
    projective_plane,
    random_linear_hypergraph,
)
from hyperchroma.oracles import brute_force_chromatic_index, brute_force_list_chromatic_index

from conftest import brute_triangles

SWEEP_SEEDS = range(20)
SWEEP = dict(n=500, r_min=3, r_max=20, target=4000)


@pytest.fixture
def verdict(capsys):
    def emit(name, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, f"{name}: {detail}"

    return emit


def quiet_random(spec):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return random_linear_hypergraph(spec)


def corpus():
    """Every generated instance the acceptance suite touches."""
    out = [projective_plane(q) for q in (2, 3, 5, 7, 11)]
    out += [lower_bound_instance(LowerBoundSpec(x, 0.1, n))[0] for x, n in ((0.25, 49), (0.5, 7))]
    for seed in range(30):
        out.append(quiet_random(RandomLinearSpec(40 + 10 * seed, 2, 3 + seed % 12, target=60 + 5 * seed, seed=seed)))
    out += [quiet_random(RandomLinearSpec(seed=s, **SWEEP)) for s in SWEEP_SEEDS[:3]]
    return [h for h in out if h.m]


def test_projective_plane_exactness(verdict):
    t0 = time.perf_counter()
    bad = []
    for q in (2, 3, 5, 7, 11):
        h = projective_plane(q)
        size = q * q + q + 1
        ok = (
            h.n == size
            and h.m == size
            and all(len(e) == q + 1 for e in h.edges)
            and all(len(set(a) & set(b)) == 1 for a, b in combinations(h.edges, 2))
            and set(vertex_degrees(h)) == {q + 1}
        )
        if not ok:
            bad.append(q)
    elapsed = time.perf_counter() - t0
    verdict("projective plane exactness", not bad and elapsed < 1.0, f"bad orders {bad}, {elapsed:.3f}s (< 1s)")


def test_fano_oracles(verdict):
    fano = projective_plane(2)
    q, _ = brute_force_chromatic_index(fano)
    t0 = time.perf_counter()
    ql = brute_force_list_chromatic_index(fano)
    elapsed = time.perf_counter() - t0
    pal = {e: list(range(7)) for e in range(7)}
    greedy = greedy_list_color(fano, range(7), pal)
    ok = q == 7 and ql == 7 and verify_coloring(fano, greedy, pal).ok and greedy.is_total() and elapsed < 60
    verdict("Fano oracles", ok, f"q={q} q_list={ql} greedy ok, list oracle {elapsed:.3f}s (< 60s)")


@pytest.mark.parametrize("x, n", [(0.25, 49), (0.5, 7)])
def test_lower_bound_certificate(verdict, x, n):
    h, cert = lower_bound_instance(LowerBoundSpec(x, 0.1, n))
    q, r = cert["q"], cert["r"]
    # exact rational checks: q^2+q+1 > xn and r^2 >= xn
    xn = Fraction(str(x)) * n
    ok = q * q + q + 1 > xn and r * r >= xn and h.n == n and h.m == q * q + q + 1
    verdict(
        f"lower-bound certificate x={x} n={n}",
        ok,
        f"q={q}: {q * q + q + 1} > {float(xn):g}, r={r}, r^2={r * r} >= {float(xn):g}",
    )


def test_triangle_oracle_equivalence(verdict):
    t0 = time.perf_counter()
    mismatches, sizes = 0, []
    for seed in range(100):
        n = 8 + seed % 23
        spec = RandomLinearSpec(n, 2, min(n, 2 + seed % 5), target=10 + seed % 31, budget=300, seed=seed)
        h = quiet_random(spec)
        assert h.m <= 40
        sizes.append(h.m)
        ts = count_triangles(h)
        t1, t2 = brute_triangles(h)
        mismatches += list(ts.type1) != t1 or list(ts.type2) != t2
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 30
    verdict(
        "triangle-count oracle equivalence",
        ok,
        f"100 instances ({min(sizes)}-{max(sizes)} edges), {mismatches} mismatches, {elapsed:.2f}s (< 30s)",
    )


def test_degree_bound_on_corpus(verdict):
    hs = corpus()
    bad = [i for i, h in enumerate(hs) if max_vertex_degree(h) > degree_bound(h)]
    verdict("degree bound", not bad, f"{len(hs)} instances, violations at {bad}")


def test_residual_contact_bound(verdict):
    runs = violations = 0
    for h in corpus():
        ranks = sorted(set(h.ranks()))
        pal = {e: list(range(4 * h.n)) for e in range(h.m)}
        # split below each dyadic boundary inside the rank range (or nowhere for uniform ranks)
        cuts = [c for c in (2, 3, 7, 15, 31) if ranks[0] <= c < ranks[-1]] or ranks[-1:]
        for cut in cuts:
            e1 = [e for e in range(h.m) if len(h.edges[e]) <= cut]
            e2 = [e for e in range(h.m) if len(h.edges[e]) > cut]
            run = color_with_residuals(h, e1, e2, pal)
            runs += 1
            if e2:
                rho2 = min(len(h.edges[e]) for e in e2)
                p1 = max(len(h.edges[e]) for e in e1) if e1 else 0
                bound = (h.n - 1) * p1 / (rho2 - 1)
                violations += sum(c > bound for c in run.contacts.values())
    verdict("residual-palette contact bound", violations == 0, f"{runs} runs, {violations} edges over the bound")


def test_pipeline_validity_sweep(verdict):
    t0 = time.perf_counter()
    valid, used, bounded = 0, [], True
    for seed in SWEEP_SEEDS:
        h = quiet_random(RandomLinearSpec(seed=seed, **SWEEP))
        Q = math.ceil(4 * h.n / 2)
        run = full_pipeline(h, 3, 1.0, 4, palette_size=Q, seed=seed)
        pal = {e: list(range(Q)) for e in range(h.m)}
        if verify_coloring(h, run.coloring, pal).ok and run.coloring.is_total():
            valid += 1
        used.append(run.coloring.colors_used())
        bounded &= run.coloring.colors_used() <= Q
    elapsed = time.perf_counter() - t0
    ok = valid == len(SWEEP_SEEDS) and bounded and elapsed < 120
    verdict(
        "pipeline validity sweep",
        ok,
        f"{valid}/{len(SWEEP_SEEDS)} valid, colors used {min(used)}-{max(used)} of Q=1000, {elapsed:.1f}s (< 120s)",
    )


def test_split_acceptance(verdict):
    pal = {e: list(range(5 * e, 5 * e + 100)) for e in range(20)}
    wins = 0
    for seed in range(100):
        try:
            parts = split_palette_random(pal, SplitParams((30, 30), p=0.5, retries=100, seed=seed))
        except SplitFailure:
            continue
        wins += all(len(parts[0][e]) >= 30 and len(parts[1][e]) >= 30 for e in pal)
    failures = 0
    for seed in range(3):
        try:
            split_palette_random({0: list(range(100))}, SplitParams((60, 60), p=0.5, retries=100, seed=seed))
        except SplitFailure:
            failures += 1
    ok = wins >= 99 and failures == 3
    verdict("split acceptance", ok, f"30/30 succeeded in {wins}/100 trials (>= 99); 60/60 failed {failures}/3")


DETERMINISM_SCRIPT = r"""
import hashlib, json, warnings
from hyperchroma.coloring import SplitParams, full_pipeline, split_palette_random
from hyperchroma.formats import format_coloring, format_hypergraph
from hyperchroma.instances import LowerBoundSpec, RandomLinearSpec, lower_bound_instance, random_linear_hypergraph
from hyperchroma.coloring import greedy_list_color
out = []
for seed in (0, 1):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        h = random_linear_hypergraph(RandomLinearSpec(500, 3, 20, target=1000, seed=seed))
    out.append(format_hypergraph(h))
    run = full_pipeline(h, 3, 1.0, 4, seed=seed)
    out.append(format_coloring(run.coloring.colors, True))
    out.append(json.dumps(run.report, sort_keys=True))
    pal = {e: list(range(1000)) for e in range(h.m)}
    out.append(repr(sorted(greedy_list_color(h, range(h.m), pal, order="random", seed=seed).colors.items())))
    out.append(repr(split_palette_random({0: list(range(100))}, SplitParams((30, 30), p=0.5, seed=seed))))
h, cert = lower_bound_instance(LowerBoundSpec(0.25, 0.1, 49))
out.append(format_hypergraph(h) + json.dumps(cert, sort_keys=True))
print(hashlib.sha256("\x00".join(out).encode()).hexdigest())
"""


def test_determinism_across_processes(verdict):
    digests = []
    for hashseed in ("0", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        res = subprocess.run([sys.executable, "-c", DETERMINISM_SCRIPT], capture_output=True, text=True, env=env)
        assert res.returncode == 0, res.stderr
        digests.append(res.stdout.strip())
    verdict("determinism across processes", digests[0] == digests[1], f"sha256 {digests[0][:16]} vs {digests[1][:16]}")
