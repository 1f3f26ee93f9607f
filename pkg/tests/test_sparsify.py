import math
import random
from fractions import Fraction

import pytest

from kcut.cuts import oracle_exact_kcut
from kcut.graph import EdgeCut, InvalidInputError, MultiGraph, cc, cut_weight
from kcut.sparsify import sample_edges, strip_cheap_2cuts


def two_triangles_bridge():
    return MultiGraph.multi(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


def k4():
    return MultiGraph.multi(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])


def random_connected(rng, n_max=9, extra=6, mult_max=2):
    n = rng.randint(3, n_max)
    edges = [(rng.randrange(v), v) for v in range(1, n)]
    for _ in range(rng.randint(0, extra)):
        u, v = rng.sample(range(n), 2)
        edges.append((u, v))
    return MultiGraph.multi(
        n, [(min(u, v), max(u, v), rng.randint(1, mult_max)) for u, v in edges]
    )


class TestStrip:
    def test_bridge_removed(self):
        res = strip_cheap_2cuts(two_triangles_bridge(), 2, 1)
        assert res.hit_k_components
        assert res.removed_weight == 1
        assert res.iterations == 1
        assert cc(res.graph) == 2

    def test_threshold_below_min_multiplicity(self):
        res = strip_cheap_2cuts(k4(), 2, Fraction(1, 10))
        assert not res.hit_k_components
        assert res.removed_weight == 0
        assert res.graph == k4()

    def test_preconditions(self):
        g = MultiGraph.multi(4, [(0, 1), (2, 3)])
        with pytest.raises(InvalidInputError):
            strip_cheap_2cuts(g, 2, 1)
        with pytest.raises(InvalidInputError):
            strip_cheap_2cuts(k4(), 2, 0)

    def test_removed_weight_bound_vs_oracle(self):
        rng = random.Random(31)
        seen = 0
        while seen < 100:
            g = random_connected(rng)
            k = rng.choice([2, 3])
            if k > g.n or cc(g) >= k:
                continue
            eps = rng.choice([Fraction(1, 4), Fraction(1, 2), Fraction(1)])
            res = strip_cheap_2cuts(g, k, eps)
            _, opt = oracle_exact_kcut(g, k)
            assert res.removed_weight <= 2 * eps * opt
            assert res.iterations <= k - 1
            seen += 1

    def test_no_cheap_cut_left(self):
        rng = random.Random(7)
        for _ in range(30):
            g = random_connected(rng, n_max=8)
            k = 2
            eps = Fraction(1, 2)
            res = strip_cheap_2cuts(g, k, eps)
            if res.hit_k_components:
                continue
            h = res.graph
            for bits in range(1, 1 << (h.n - 1)):
                side = frozenset(v for v in range(h.n) if bits >> v & 1)
                order = EdgeCut.of(h, side).order
                if order > 0:
                    assert order > res.threshold


class TestSample:
    def test_capped_rate_returns_input(self):
        g = two_triangles_bridge()
        res = sample_edges(g, 2, Fraction(1, 2), seed=5)
        # 100 ln 6 far exceeds eps^2 * mincut here, so p caps at 1.
        assert res.rate == 1 and res.inverse_rate == 1
        assert res.graph == g

    def test_epsilon_guard(self):
        g = two_triangles_bridge()
        with pytest.raises(InvalidInputError):
            sample_edges(g, 2, Fraction(1, 6))

    def test_reproducible(self):
        g = heavy_ring()
        a = sample_edges(g, 2, Fraction(1, 2), seed=42)
        b = sample_edges(g, 2, Fraction(1, 2), seed=42)
        assert a.rate < 1
        assert a.graph == b.graph and a.rate == b.rate
        c = sample_edges(g, 2, Fraction(1, 2), seed=43)
        assert c.graph != a.graph  # overwhelmingly likely at this unit count

    def test_binomial_mean(self):
        g = heavy_ring()
        p = None
        total = 0
        units = sum(w for _, _, w in g.edges)
        n_seeds = 200
        for seed in range(n_seeds):
            res = sample_edges(g, 2, Fraction(1, 2), seed=seed)
            p = float(res.rate)
            total += sum(w for _, _, w in res.graph.edges)
        assert p is not None and p < 1
        mean = total / n_seeds
        expect = p * units
        sigma = math.sqrt(units * p * (1 - p) / n_seeds)
        assert abs(mean - expect) <= 3 * sigma

    def test_unbiased_scaled_cut(self):
        g = heavy_ring()
        part = EdgeCut.of(g, frozenset(range(4)))
        w_true = part.order
        acc = Fraction(0)
        n_seeds = 500
        for seed in range(n_seeds):
            res = sample_edges(g, 2, Fraction(1, 2), seed=seed)
            w_sample = EdgeCut.of(res.graph, frozenset(range(4))).order
            acc += res.inverse_rate * w_sample
        mean = acc / n_seeds
        assert abs(mean - w_true) <= Fraction(w_true) / 100

    def test_subgraph_property(self):
        g = heavy_ring()
        res = sample_edges(g, 2, Fraction(1, 2), seed=3)
        assert res.rate < 1
        orig = {(u, v): w for u, v, w in g.edges}
        for u, v, w in res.graph.edges:
            assert w <= orig[(u, v)]


def heavy_ring():
    """An 8-cycle with 500-fold edges: the minimum 2-cut is 1000, large
    enough that the sampling rate 100 ln 8 / (eps^2 * 1000) stays below 1
    for eps = 1/2."""
    return MultiGraph.multi(8, [(i, (i + 1) % 8, 500) for i in range(8)])
