"""Spanning tree families for the exact solver.

The solver only needs one family member that crosses some optimal k-cut at
most 2k-2 times.  Such a tree always exists among all spanning trees (take
spanning forests inside the optimal parts plus k-1 connecting edges), so the
exhaustive enumerator below is a complete, if brute-force, supplier.  The
greedy load-balancing packer is the scalable stand-in: each new tree is a
minimum spanning tree under costs that grow with prior usage, spreading the
family across the edge set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .graph import InvalidInputError, MultiGraph, Partition, is_connected


@dataclass(frozen=True)
class TreeFamily:
    """Spanning trees stored as tuples of edge-class indices into g.edges."""

    graph: MultiGraph
    trees: tuple[tuple[int, ...], ...]
    loads: tuple[int, ...]

    def tree_edges(self, i: int) -> tuple[tuple[int, int], ...]:
        return tuple((self.graph.edges[e][0], self.graph.edges[e][1]) for e in self.trees[i])

    def __len__(self) -> int:
        return len(self.trees)


class _Dsu:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def pack_trees(g: MultiGraph, count: int) -> TreeFamily:
    """Greedy packing: tree i+1 is an MST under per-class usage costs.

    The cost of an edge class is its usage count divided by its multiplicity,
    so classes with many parallel copies absorb proportionally more trees.
    Ties break on edge index.  Duplicate trees are dropped.
    """
    if count < 1:
        raise InvalidInputError("tree count must be positive")
    if not is_connected(g) or g.n == 0:
        raise InvalidInputError("tree packing needs a connected graph")
    loads = [0] * g.m
    seen: set[tuple[int, ...]] = set()
    trees: list[tuple[int, ...]] = []
    for _ in range(count):
        order = sorted(range(g.m), key=lambda e: (Fraction(loads[e], g.edges[e][2]), e))
        dsu = _Dsu(g.n)
        tree = []
        for e in order:
            u, v, _ = g.edges[e]
            if dsu.union(u, v):
                tree.append(e)
        assert len(tree) == g.n - 1
        key = tuple(sorted(tree))
        for e in tree:
            loads[e] += 1
        if key not in seen:
            seen.add(key)
            trees.append(key)
    return TreeFamily(g, tuple(trees), tuple(loads))


def enumerate_spanning_trees(g: MultiGraph, cap: int = 5000) -> TreeFamily:
    """All spanning trees up to ``cap``, as edge-class index tuples.

    Classic include/exclude backtracking over the class list with a
    connectivity prune.  Parallel classes between the same endpoints yield
    structurally equal but distinct trees; they are deduplicated by class
    index set, not by vertex pairs, matching how the DP consumes them.
    """
    if not is_connected(g) or g.n == 0:
        raise InvalidInputError("spanning tree enumeration needs a connected graph")
    m = g.m
    found: list[tuple[int, ...]] = []

    def connectable(picked: _Dsu, start: int) -> bool:
        probe = _Dsu(g.n)
        probe.parent = list(picked.parent)
        comps = len({probe.find(v) for v in range(g.n)})
        for e in range(start, m):
            u, v, _ = g.edges[e]
            if probe.union(u, v):
                comps -= 1
        return comps == 1

    def rec(e: int, dsu: _Dsu, chosen: list[int]):
        if len(found) >= cap:
            return
        if len(chosen) == g.n - 1:
            found.append(tuple(chosen))
            return
        if e == m or not connectable(dsu, e):
            return
        u, v, _ = g.edges[e]
        if dsu.find(u) != dsu.find(v):
            child = _Dsu(g.n)
            child.parent = list(dsu.parent)
            child.union(u, v)
            chosen.append(e)
            rec(e + 1, child, chosen)
            chosen.pop()
        rec(e + 1, dsu, chosen)

    rec(0, _Dsu(g.n), [])
    loads = [0] * m
    for t in found:
        for e in t:
            loads[e] += 1
    return TreeFamily(g, tuple(found), tuple(loads))


def crossings(tree: Iterable[tuple[int, int]], p: Partition) -> int:
    """Number of tree edges whose endpoints lie in different parts."""
    label = p.part_of()
    count = 0
    for u, v in tree:
        if label[u] != label[v]:
            count += 1
    return count
