import math
import warnings
from collections import Counter
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperchroma.hypergraph import Hypergraph, validate_linear
from hyperchroma.instances import (
    InfeasibleSpec,
    LowerBoundSpec,
    RandomLinearSpec,
    ShortfallWarning,
    is_prime,
    lower_bound_instance,
    pad_isolated,
    projective_plane,
    random_linear_hypergraph,
    smallest_prime_at_least,
)


def sieve(limit):
    flags = [False, False] + [True] * (limit - 1)
    for p in range(2, int(limit**0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = [False] * len(flags[p * p :: p])
    return [i for i, f in enumerate(flags) if f]


class TestPrimes:
    def test_against_sieve(self):
        primes = set(sieve(2000))
        assert all(is_prime(q) == (q in primes) for q in range(-3, 2001))

    @pytest.mark.parametrize("u, q", [(10, 11), (11, 11), (14, 17), (1.87, 2), (0, 2), (2.0001, 3)])
    def test_smallest_at_least(self, u, q):
        assert smallest_prime_at_least(u) == q


class TestProjectivePlane:
    @pytest.mark.parametrize("q", [2, 3, 5, 7, 11])
    def test_invariants(self, q):
        h = projective_plane(q)
        size = q * q + q + 1
        assert h.n == size and h.m == size
        assert all(len(e) == q + 1 for e in h.edges)
        assert all(len(set(a) & set(b)) == 1 for a, b in combinations(h.edges, 2))
        deg = Counter(v for e in h.edges for v in e)
        assert set(deg.values()) == {q + 1} and len(deg) == size
        # any two points lie on exactly one line
        pairs = Counter(p for e in h.edges for p in combinations(e, 2))
        assert len(pairs) == math.comb(size, 2) and set(pairs.values()) == {1}

    def test_fano_edges(self, fano):
        assert fano.edges[0] == (0, 1, 2)
        assert validate_linear(fano).ok

    @pytest.mark.parametrize("q", [1, 4, 6, 9])
    def test_non_prime(self, q):
        with pytest.raises(ValueError):
            projective_plane(q)


class TestPad:
    def test_pad(self, fano):
        h = pad_isolated(fano, 10)
        assert h.n == 10 and h.edges == fano.edges

    def test_no_shrink(self, fano):
        with pytest.raises(ValueError):
            pad_isolated(fano, 6)


class TestLowerBound:
    def test_quarter_of_49(self):
        h, cert = lower_bound_instance(LowerBoundSpec(0.25, 0.1, 49))
        # sqrt(12.25) = 3.5, so q = 5 and the plane has 31 lines on 31 of 49 vertices
        assert cert["q"] == 5 and cert["points"] == 31 and h.n == 49 and h.m == 31
        assert 31 > 12.25 and cert["bound_exceeds_xn"]
        assert cert["r"] == 6 and 36 >= 12.25 and cert["r_ge_sqrt_xn"]
        assert cert["claim"] == "31 > 12.25"
        # 36 > (1.1)^2 * 12.25, so the upper side of the window fails for small delta
        assert cert["r_le_1_plus_delta_sqrt_xn"] is False

    def test_half_of_7(self):
        h, cert = lower_bound_instance(LowerBoundSpec(0.5, 0.1, 7))
        assert cert["q"] == 2 and h == projective_plane(2)
        assert cert["chromatic_index"] == 7 > 3.5
        assert cert["r"] ** 2 >= 3.5

    def test_infeasible(self):
        with pytest.raises(InfeasibleSpec) as info:
            lower_bound_instance(LowerBoundSpec(0.9, 0.1, 10))
        best = info.value.smallest_feasible_n
        assert best == 133
        lower_bound_instance(LowerBoundSpec(0.9, 0.1, best))
        with pytest.raises(InfeasibleSpec):
            lower_bound_instance(LowerBoundSpec(0.9, 0.1, best - 1))

    @settings(max_examples=60, deadline=None)
    @given(st.sampled_from([0.05, 0.1, 0.25, 0.5, 0.75, 0.9]), st.integers(1, 400))
    def test_smallest_feasible_n_is_minimal(self, x, n):
        try:
            _, cert = lower_bound_instance(LowerBoundSpec(x, 0.5, n))
        except InfeasibleSpec as exc:
            best = exc.smallest_feasible_n
            assert best > n
            _, cert = lower_bound_instance(LowerBoundSpec(x, 0.5, best))
            for m in range(n, best):
                with pytest.raises(InfeasibleSpec):
                    lower_bound_instance(LowerBoundSpec(x, 0.5, m))
        q = cert["q"]
        assert is_prime(q) and q * q >= cert["xn"] - 1e-9
        assert cert["points"] == q * q + q + 1 > cert["xn"]

    @pytest.mark.parametrize("kwargs", [dict(x=0, delta=0.1, n=5), dict(x=1, delta=0.1, n=5), dict(x=0.5, delta=0, n=5)])
    def test_bad_params(self, kwargs):
        with pytest.raises(ValueError):
            LowerBoundSpec(**kwargs)


class TestRandomLinear:
    def test_full_rank_gives_one_edge(self):
        h = random_linear_hypergraph(RandomLinearSpec(6, 6, 6, seed=1))
        assert h.edges == ((0, 1, 2, 3, 4, 5),)

    def test_zero_target(self):
        assert random_linear_hypergraph(RandomLinearSpec(10, 2, 3, target=0)).m == 0

    def test_frozen_fano_seed(self):
        # seed 4 happens to pack a complete Fano plane (relabeled)
        h = random_linear_hypergraph(RandomLinearSpec(7, 3, 3, target=7, seed=4))
        assert h.edges == ((0, 2, 3), (0, 1, 5), (1, 2, 6), (2, 4, 5), (0, 4, 6), (1, 3, 4), (3, 5, 6))
        assert all(len(set(a) & set(b)) == 1 for a, b in combinations(h.edges, 2))

    def test_shortfall_warning(self):
        with pytest.warns(ShortfallWarning, match="packed"):
            h = random_linear_hypergraph(RandomLinearSpec(8, 4, 4, target=50, budget=50, seed=0))
        assert validate_linear(h).ok and h.m < 50

    @pytest.mark.parametrize(
        "kwargs",
        [dict(n=5, r_min=1, r_max=3), dict(n=5, r_min=3, r_max=2), dict(n=5, r_min=2, r_max=6),
         dict(n=5, r_min=2, r_max=3, budget=0), dict(n=5, r_min=2, r_max=3, target=-1)],
    )
    def test_bad_params(self, kwargs):
        with pytest.raises(ValueError):
            RandomLinearSpec(**kwargs)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(4, 60), st.integers(2, 6), st.integers(0, 4), st.integers(0, 10**6))
    def test_valid_ranked_and_deterministic(self, n, r_min, spread, seed):
        r_min = min(r_min, n)
        r_max = min(n, r_min + spread)
        spec = RandomLinearSpec(n, r_min, r_max, target=30, budget=100, seed=seed)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            h = random_linear_hypergraph(spec)
            again = random_linear_hypergraph(spec)
        assert h == again
        assert validate_linear(h).ok
        assert all(r_min <= len(e) <= r_max for e in h.edges)
        assert isinstance(h, Hypergraph) and h.n == n
