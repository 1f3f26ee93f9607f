import random

import pytest

from kcut.decomposition import (
    LeanWitness,
    TreeDecomposition,
    build_unbreakable_decomposition,
    cleanup,
    compactify,
    dump_decomposition,
    find_breakability_witness,
    is_bag_unbreakable,
    is_compact,
    parse_decomposition,
    potential,
    refine,
    validate_decomposition,
    witness_to_lean,
)
from kcut.graph import InvalidInputError, MultiGraph


def path(n):
    return MultiGraph.multi(n, [(i, i + 1) for i in range(n - 1)])


def clique(n):
    return MultiGraph.multi(n, [(a, b) for a in range(n) for b in range(a + 1, n)])


def random_connected(rng, n_max=10, extra=6):
    n = rng.randint(2, n_max)
    edges = [(rng.randrange(v), v) for v in range(1, n)]
    for _ in range(rng.randint(0, extra)):
        u, v = rng.sample(range(n), 2)
        edges.append((u, v))
    return MultiGraph.multi(n, [(min(u, v), max(u, v)) for u, v in edges])


class TestPotential:
    def test_small_bags_zero(self):
        td = TreeDecomposition((frozenset([0, 1, 2]),), (-1,))
        assert potential(td, 1) == 0

    def test_single_overshoot(self):
        td = TreeDecomposition((frozenset(range(2 * 2 + 3)),), (-1,))
        assert potential(td, 2) == 2

    def test_two_bags(self):
        s = 1
        td = TreeDecomposition(
            (frozenset(range(2 * s + 2)), frozenset(range(100, 100 + 2 * s + 5))),
            (-1, 0),
        )
        assert potential(td, s) == 1 + 4


class TestWitnessSearch:
    def test_few_terminals_absent(self):
        g = path(6)
        assert find_breakability_witness(g, [0, 1, 2], 1) is None

    def test_long_path_returns_balanced_cut(self):
        g = path(8)
        cut = find_breakability_witness(g, range(8), 1)
        assert cut is not None
        assert cut.order <= 1
        assert len(cut.side_a) >= 2 and len(cut.side_b) >= 2

    def test_clique_absent(self):
        g = clique(6)
        assert find_breakability_witness(g, range(6), 2) is None

    def test_disconnected_rejected(self):
        g = MultiGraph.multi(4, [(0, 1), (2, 3)])
        with pytest.raises(InvalidInputError):
            find_breakability_witness(g, range(4), 1)

    def test_returned_cut_is_balanced_random(self):
        rng = random.Random(8)
        for _ in range(25):
            g = random_connected(rng, n_max=9)
            s = rng.choice([1, 2])
            cut = find_breakability_witness(g, range(g.n), s)
            if cut is not None:
                assert cut.order <= s
                assert len(cut.side_a) >= s + 1 and len(cut.side_b) >= s + 1


class TestWitnessToLean:
    def test_two_triangles_bridge(self):
        s = 1
        g = MultiGraph.multi(
            6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]
        )
        td = TreeDecomposition((frozenset(range(6)),), (-1,))
        cut = find_breakability_witness(g, range(6), s)
        assert cut is not None
        lean = witness_to_lean(td, 0, cut, s, g)
        assert len(lean.separator) <= s
        assert len(lean.z1) == len(lean.z2) == s + 1

    def test_invariants_enforced(self):
        with pytest.raises(InvalidInputError):
            LeanWitness(
                node=0,
                z1=frozenset([1, 2]),
                z2=frozenset([3, 4]),
                x1=frozenset([1, 2, 3]),
                x2=frozenset([3, 4]),
                separator=frozenset([3]),
                paths=((1, 3, 4), (2, 3, 4)),  # overlapping paths
            )


class TestRefine:
    def test_path_refinement_decreases_potential(self):
        g = path(8)
        s = 1
        td = TreeDecomposition((frozenset(range(8)),), (-1,))
        cut = find_breakability_witness(g, range(8), s)
        lean = witness_to_lean(td, 0, cut, s, g)
        before = potential(td, s)
        td2 = refine(td, lean, s, g)
        assert potential(td2, s) < before
        validate_decomposition(td2, g)
        assert td2.max_adhesion() <= s

    def test_random_refinements_stay_valid(self):
        rng = random.Random(5)
        done = 0
        while done < 60:
            g = random_connected(rng, n_max=9)
            s = rng.choice([1, 2])
            td = TreeDecomposition((frozenset(range(g.n)),), (-1,))
            if len(td.bags[0]) <= 2 * s + 1:
                continue
            cut = find_breakability_witness(g, td.bags[0], s)
            if cut is None:
                continue
            lean = witness_to_lean(td, 0, cut, s, g)
            td2 = refine(td, lean, s, g)
            validate_decomposition(td2, g)
            assert td2.max_adhesion() <= s
            assert potential(td2, s) < potential(td, s)
            done += 1


class TestCleanup:
    def test_identity_when_clean(self):
        td = TreeDecomposition((frozenset([0, 1]), frozenset([1, 2])), (-1, 0))
        assert cleanup(td) == td

    def test_duplicate_bags_merged(self):
        td = TreeDecomposition((frozenset([0, 1]), frozenset([0, 1])), (-1, 0))
        assert len(cleanup(td)) == 1

    def test_nested_chain_collapses(self):
        td = TreeDecomposition(
            (frozenset([0]), frozenset([0, 1]), frozenset([0, 1, 2])),
            (-1, 0, 1),
        )
        out = cleanup(td)
        assert len(out) == 1
        assert out.bags[0] == frozenset([0, 1, 2])


class TestCompactify:
    def test_compact_input_unchanged_shape(self):
        g = path(3)
        td = TreeDecomposition((frozenset([0, 1]), frozenset([1, 2])), (-1, 0))
        out = compactify(td, g)
        assert is_compact(out, g)
        validate_decomposition(out, g)

    def test_disconnected_alpha_split(self):
        # Star decomposition where one child bag holds two components.
        g = MultiGraph.multi(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
        td = TreeDecomposition(
            (frozenset([0]), frozenset([0, 1, 2]), frozenset([0, 3, 4])),
            (-1, 0, 0),
        )
        out = compactify(td, g)
        assert is_compact(out, g)
        validate_decomposition(out, g)
        for t in range(len(out)):
            assert any(out.bags[t] <= b for b in td.bags)

    def test_single_bag(self):
        g = clique(4)
        td = TreeDecomposition((frozenset(range(4)),), (-1,))
        assert compactify(td, g) == td


class TestBuild:
    def test_tree_input(self):
        g = path(7)
        td = build_unbreakable_decomposition(g, 1)
        validate_decomposition(td, g)
        assert is_compact(td, g)
        assert td.max_adhesion() <= 1

    def test_clique_single_bag(self):
        g = clique(8)
        td = build_unbreakable_decomposition(g, 2)
        assert len(td) == 1
        assert td.bags[0] == frozenset(range(8))

    def test_disconnected(self):
        g = MultiGraph.multi(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
        td = build_unbreakable_decomposition(g, 1)
        validate_decomposition(td, g)

    def test_s_zero_single_bag(self):
        g = path(5)
        td = build_unbreakable_decomposition(g, 0)
        validate_decomposition(td, g)
        assert td.max_adhesion() == 0

    def test_random_validity_and_potential_log(self):
        rng = random.Random(77)
        for _ in range(40):
            g = random_connected(rng, n_max=10)
            s = rng.choice([1, 2, 3])
            td, log = build_unbreakable_decomposition(g, s, with_log=True)
            validate_decomposition(td, g)
            assert is_compact(td, g)
            assert td.max_adhesion() <= s
            for before, after in zip(log[::2], log[1::2]):
                assert after < before

    def test_unbreakability_small_graphs(self):
        rng = random.Random(13)
        checked = 0
        while checked < 12:
            g = random_connected(rng, n_max=7, extra=3)
            if g.m > 10:
                continue
            s = rng.choice([1, 2])
            td = build_unbreakable_decomposition(g, s)
            q = (s + 1) ** 5
            for bag in td.bags:
                assert is_bag_unbreakable(g, bag, q, s)
            checked += 1


class TestDump:
    def test_round_trip(self):
        g = path(6)
        td = build_unbreakable_decomposition(g, 1)
        text = dump_decomposition(td)
        assert parse_decomposition(text) == td
