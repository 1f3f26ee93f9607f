"""Exact minimum k-cut on unweighted multigraphs, fixed-parameter in the
solution size.

The solver walks a compact edge-unbreakable tree decomposition bottom-up.
At each node it guesses which edges of the spanning-tree projection an
optimal solution cuts, derives from that guess a coarse split of the bag
into a center and loosely attached satellite parts, and then runs a
knapsack-style composition over the children hanging off each satellite.
Every finite table entry corresponds to an actually constructible partition;
traceback reconstruction re-verifies this by recomputing weights.

Internally partitions are tuples of integer bitmasks sorted ascending; the
empty-ground partition is the empty tuple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .decomposition import TreeDecomposition, build_unbreakable_decomposition
from .graph import (
    MULTI,
    InvalidInputError,
    MultiGraph,
    Partition,
    cut_weight,
    is_connected,
)
from .treepack import TreeFamily, enumerate_spanning_trees, pack_trees

DEFAULT_TREE_CAP = 5000


def tau_big(k: int, s: int) -> int:
    """Bags at most this large take the single-candidate preprocessing branch."""
    return 2 * k * (s + 1) ** 5


def guess_budget(k: int) -> int:
    """Maximum number of projected tree edges an optimal cut can cross."""
    return 2 * k - 2


def avoid_budget(k: int, s: int) -> int:
    """Size cap for the edge set a cut guess must avoid."""
    return 2 * (2 * k - 1) * (tau_big(k, s) + 2 * k - 2)


# -- bitmask partition helpers ----------------------------------------------

MaskPartition = tuple[int, ...]


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _bits(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def _proj_masks(parts: Sequence[int], mask: int) -> MaskPartition:
    return tuple(sorted(p & mask for p in parts if p & mask))


def mask_partition(p: Partition) -> MaskPartition:
    if p.is_empty():
        return ()
    return tuple(sorted(_mask(part) for part in p.parts))


def unmask_partition(parts: MaskPartition) -> Partition:
    if not parts:
        return Partition.empty()
    return Partition.from_parts([_bits(p) for p in parts])


_LABELS_CACHE: dict[int, tuple[tuple[int, ...], ...]] = {}


def _label_vectors(c: int) -> tuple[tuple[int, ...], ...]:
    """Restricted-growth strings of length c: every grouping of c items once."""
    got = _LABELS_CACHE.get(c)
    if got is not None:
        return got
    out: list[tuple[int, ...]] = []
    vec = [0] * c

    def rec(i: int, top: int):
        if i == c:
            out.append(tuple(vec))
            return
        for lab in range(top + 1):
            vec[i] = lab
            rec(i + 1, top + (1 if lab == top else 0))

    if c:
        rec(1, 1)
    else:
        out.append(())
    res = tuple(out)
    _LABELS_CACHE[c] = res
    return res


def _groupings(pieces: Sequence[int]) -> list[MaskPartition]:
    """All merges of disjoint masks into coarser partitions."""
    out = []
    for labels in _label_vectors(len(pieces)):
        acc: dict[int, int] = {}
        for piece, lab in zip(pieces, labels):
            acc[lab] = acc.get(lab, 0) | piece
        out.append(tuple(sorted(acc.values())))
    return out


# -- spanning tree projection ------------------------------------------------


@dataclass(frozen=True)
class ProjEdge:
    u: int
    v: int
    path: tuple[int, ...]  # original tree path from u to v, inclusive


@dataclass(frozen=True)
class ProjectedTree:
    """A spanning tree restricted to a hub set X: leaves and degree-2
    vertices outside X are dissolved, so at most 2|X| vertices remain."""

    x: frozenset[int]
    vertices: frozenset[int]
    edges: tuple[ProjEdge, ...]


def project_tree(tree: Iterable[tuple[int, int]], x: Iterable[int]) -> ProjectedTree:
    """Exhaustively delete non-X leaves and smooth non-X degree-2 vertices."""
    xset = frozenset(x)
    adj: dict[int, dict[int, tuple[int, ...]]] = {}
    for u, v in tree:
        adj.setdefault(u, {})[v] = (u, v)
        adj.setdefault(v, {})[u] = (v, u)
    if not adj:
        if len(xset) > 1:
            raise InvalidInputError("projection hub set exceeds the tree")
        return ProjectedTree(xset, xset, ())

    changed = True
    while changed:
        changed = False
        for v in sorted(adj):
            if v in xset:
                continue
            deg = len(adj[v])
            if deg == 1:
                (u,) = adj[v]
                del adj[u][v]
                del adj[v]
                changed = True
            elif deg == 2:
                a, b = sorted(adj[v])
                path_a = adj[v][a]  # path v..a
                path_b = adj[v][b]
                del adj[a][v]
                del adj[b][v]
                del adj[v]
                adj[a][b] = tuple(reversed(path_a)) + path_b[1:]
                adj[b][a] = tuple(reversed(path_b)) + path_a[1:]
                changed = True

    verts = frozenset(adj)
    edges = []
    for u in sorted(adj):
        for v in sorted(adj[u]):
            if u < v:
                edges.append(ProjEdge(u, v, adj[u][v]))
    out = ProjectedTree(xset, verts, tuple(edges))
    assert xset <= verts or not xset
    assert len(verts) <= max(2 * len(xset), 1) or not xset
    return out


def _tree_components(verts: Sequence[int], edges: Sequence[ProjEdge], cut: set[int]) -> list[int]:
    """Component masks of the projected tree after deleting ``cut`` edges."""
    parent = {v: v for v in verts}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, e in enumerate(edges):
        if i not in cut:
            parent[find(e.u)] = find(e.v)
    groups: dict[int, int] = {}
    for v in verts:
        r = find(v)
        groups[r] = groups.get(r, 0) | (1 << v)
    return sorted(groups.values())


# -- feasible families --------------------------------------------------------


@dataclass(frozen=True)
class FeasibleFamily:
    x: frozenset[int]
    partitions: tuple[Partition, ...]


def _feasible_masks(pt: ProjectedTree, k: int) -> frozenset[MaskPartition]:
    """Projections onto X of all partitions of the projected tree obtainable
    by cutting at most 2k-2 edges and merging the resulting components."""
    if not pt.x:
        return frozenset({()})
    xmask = _mask(pt.x)
    verts = sorted(pt.vertices)
    out: set[MaskPartition] = set()
    budget = min(guess_budget(k), len(pt.edges))
    for r in range(budget + 1):
        for cut in combinations(range(len(pt.edges)), r):
            comps = _tree_components(verts, pt.edges, set(cut))
            for merged in _groupings(comps):
                out.add(_proj_masks(merged, xmask))
    return frozenset(out)


def feasible_family(pt: ProjectedTree, k: int) -> FeasibleFamily:
    masks = sorted(_feasible_masks(pt, k))
    return FeasibleFamily(pt.x, tuple(unmask_partition(m) for m in masks))


# -- nice decompositions ------------------------------------------------------


@dataclass(frozen=True)
class NiceDecomposition:
    """A bag split (coarse parts, refinement, center) steering the knapsack.

    ``center`` is 0 (no center; then ``pprime`` has one part) or one of the
    ``pprime`` masks.  ``qtilde`` refines ``pprime`` and leaves the center
    whole; non-center parts see at most 2k-1 refinement pieces, share no
    graph edge, and share no adhesion.
    """

    pprime: MaskPartition
    qtilde: MaskPartition
    center: int


def validate_nice_decomposition(
    nd: NiceDecomposition,
    bag_mask: int,
    edges: Sequence[tuple[int, int, int]],
    adhesions: Sequence[int],
    k: int,
) -> None:
    if sum(nd.pprime) != bag_mask or sum(nd.qtilde) != bag_mask:
        raise AssertionError("nice decomposition must partition the bag")
    for q in nd.qtilde:
        if not any(q & p == q for p in nd.pprime):
            raise AssertionError("refinement property violated")
    if nd.center:
        if nd.center not in nd.pprime or nd.center not in nd.qtilde:
            raise AssertionError("center must be a part left whole")
    elif len(nd.pprime) != 1:
        raise AssertionError("empty center requires a single part")
    satellites = [p for p in nd.pprime if p != nd.center]
    for p in satellites:
        pieces = sum(1 for q in nd.qtilde if q & p)
        if pieces > 2 * k - 1:
            raise AssertionError("satellite refined into too many pieces")
    for u, v, _ in edges:
        hu = [p for p in satellites if p >> u & 1]
        hv = [p for p in satellites if p >> v & 1]
        if hu and hv and hu[0] != hv[0]:
            raise AssertionError("edge between satellites")
    for a in adhesions:
        touched = [p for p in satellites if p & a]
        if len(touched) > 1:
            raise AssertionError("adhesion spans two satellites")


# -- engine -------------------------------------------------------------------


class _Coarse:
    """One candidate partition of a level mask, with cached bookkeeping."""

    __slots__ = ("parts", "nparts", "w_base", "at_proj", "child_items")

    def __init__(self, parts, nparts, w_base, at_proj, child_items):
        self.parts = parts
        self.nparts = nparts
        self.w_base = w_base
        self.at_proj = at_proj
        self.child_items = child_items


class _Level:
    """Coarsening candidates for one knapsack level, indexed for fast eval.

    Candidates group by their adhesion projection when the level hosts the
    node's own adhesion.  Levels without children additionally keep only the
    per-(projection, part count) minima, since nothing else can matter.
    """

    __slots__ = ("mask", "check_at", "childless", "by_at", "coarsenings", "best")

    def __init__(self, mask: int, check_at: bool, childless: bool):
        self.mask = mask
        self.check_at = check_at
        self.childless = childless
        self.by_at: dict[MaskPartition, list[_Coarse]] = {}
        self.coarsenings: list[_Coarse] = []
        self.best: dict[tuple, tuple[int, _Coarse]] = {}

    def add(self, co: _Coarse) -> None:
        # No weight filtering here: level structures are budget-independent
        # and shared across budgets; evaluation applies the clamp.
        self.coarsenings.append(co)
        if self.childless:
            key = (co.at_proj if self.check_at else None, co.nparts)
            cur = self.best.get(key)
            if cur is None or co.w_base < cur[0]:
                self.best[key] = (co.w_base, co)
        elif self.check_at:
            self.by_at.setdefault(co.at_proj, []).append(co)

    def candidates(self, pa: MaskPartition) -> list[_Coarse]:
        return self.by_at.get(pa, []) if self.check_at else self.coarsenings


class _Skeleton:
    """Levels of one knapsack run.  ``static`` skeletons touch no child
    tables, so their evaluations can be memoized across trees."""

    __slots__ = ("levels", "center", "seen_parts", "static", "memo")

    def __init__(self, levels: list[_Level], center: int):
        self.levels = levels
        self.center = center
        self.seen_parts: set = set()
        self.static = False
        self.memo: dict = {}

    def seal(self) -> None:
        self.static = all(lvl.childless for lvl in self.levels)


@dataclass
class _NodeCtx:
    node: int
    bag: frozenset[int]
    bag_mask: int
    adh_mask: int
    gamma_mask: int
    children: list[int]
    child_adh: dict[int, int]
    bag_edges: list[tuple[int, int, int]]
    gamma_edges: list[tuple[int, int, int]]
    adhesions: list[int]
    small: bool


_GRAPH_MEMOS: dict[MultiGraph, tuple[dict, dict]] = {}
_DECOMP_CACHE: dict[tuple[MultiGraph, int], TreeDecomposition] = {}
_ENGINE_CACHE: dict[tuple, "_Engine"] = {}


def _shared_memos(g: MultiGraph) -> tuple[dict, dict]:
    got = _GRAPH_MEMOS.get(g)
    if got is None:
        if len(_GRAPH_MEMOS) > 32:
            _GRAPH_MEMOS.clear()
        got = ({}, {})
        _GRAPH_MEMOS[g] = got
    return got


def _cached_decomposition(g: MultiGraph, s: int) -> TreeDecomposition:
    key = (g, s)
    got = _DECOMP_CACHE.get(key)
    if got is None:
        if len(_DECOMP_CACHE) > 128:
            _DECOMP_CACHE.clear()
        got = build_unbreakable_decomposition(g, s)
        _DECOMP_CACHE[key] = got
    return got


def _cached_engine(g: MultiGraph, td: TreeDecomposition, k: int, s: int) -> "_Engine":
    """Engines hold only budget-independent structure, so one instance can
    serve a whole budget sweep as long as the decomposition and the
    small-bag branch pattern agree."""
    smalls = tuple(len(b) <= tau_big(k, s) for b in td.bags)
    key = (g, td, k, smalls)
    got = _ENGINE_CACHE.get(key)
    if got is None:
        if len(_ENGINE_CACHE) > 8:
            _ENGINE_CACHE.clear()
        got = _Engine(g, td, k, s)
        _ENGINE_CACHE[key] = got
    return got


class _Engine:
    """Budget-independent solver state shared across family trees and
    across budget sweeps: node contexts, coarsening candidates, crossing
    weights, and per-tree skeletons.

    The crossing-weight and grouping memos do not depend on k or the
    decomposition either, so they are shared per graph."""

    def __init__(self, g: MultiGraph, td: TreeDecomposition, k: int, s: int):
        self.g = g
        self.td = td
        self.k = k
        self.ctxs: dict[int, _NodeCtx] = {}
        self._wmemo, self._grouping_cache = _shared_memos(g)
        self._coarse_cache: dict[tuple, dict[MaskPartition, _Coarse]] = {}
        self._tree_cache: dict[tuple, tuple[dict, dict]] = {}
        self._cand_cache: dict[tuple, list[NiceDecomposition]] = {}
        self._skel_cache: dict[tuple, _Skeleton | None] = {}
        self._small = tuple(len(b) <= tau_big(k, s) for b in td.bags)
        for t in range(len(td)):
            self._build_ctx(t)

    def tree_data(self, tree: tuple[tuple[int, int], ...]) -> tuple[dict, dict]:
        """Per-tree skeletons and adhesion families, cached by edge pairs."""
        got = self._tree_cache.get(tree)
        if got is None:
            skels = {t: self._node_skeletons(t, tree) for t in range(len(self.td))}
            fams = {
                t: _feasible_masks(project_tree(tree, self.td.adhesion(t)), self.k)
                for t in range(len(self.td))
            }
            got = (skels, fams)
            self._tree_cache[tree] = got
        return got

    def groupings_of(self, pieces: tuple[int, ...]) -> list[MaskPartition]:
        got = self._grouping_cache.get(pieces)
        if got is None:
            got = _groupings(pieces)
            self._grouping_cache[pieces] = got
        return got

    def _build_ctx(self, t: int) -> None:
        td = self.td
        bag = td.bags[t]
        gamma = td.gamma(t)
        children = td.children(t)
        child_adh = {c: _mask(td.adhesion(c)) for c in children}
        ctx = _NodeCtx(
            node=t,
            bag=bag,
            bag_mask=_mask(bag),
            adh_mask=_mask(td.adhesion(t)),
            gamma_mask=_mask(gamma),
            children=children,
            child_adh=child_adh,
            bag_edges=[(u, v, w) for u, v, w in self.g.edges if u in bag and v in bag],
            gamma_edges=[(u, v, w) for u, v, w in self.g.edges if u in gamma and v in gamma],
            adhesions=[child_adh[c] for c in children] + [_mask(td.adhesion(t))],
            small=self._small[t],
        )
        self.ctxs[t] = ctx

    def crossing_weight(self, parts: MaskPartition) -> int:
        """Crossing weight of a mask partition within the induced subgraph
        on its ground set; memoized across trees and guesses."""
        got = self._wmemo.get(parts)
        if got is not None:
            return got
        union = 0
        for p in parts:
            union |= p
        total = 0
        for u, v, w in self.g.edges:
            if union >> u & 1 and union >> v & 1:
                for p in parts:
                    if p >> u & 1:
                        if not (p >> v & 1):
                            total += w
                        break
        self._wmemo[parts] = total
        return total

    def coarse_dict(self, node: int, kids: tuple[int, ...]) -> dict[MaskPartition, _Coarse]:
        key = (node, kids)
        got = self._coarse_cache.get(key)
        if got is None:
            got = {}
            self._coarse_cache[key] = got
        return got

    def coarse(self, ctx: _NodeCtx, parts: MaskPartition, kids: tuple[int, ...]) -> _Coarse:
        cdict = self.coarse_dict(ctx.node, kids)
        got = cdict.get(parts)
        if got is not None:
            return got
        return self._make_coarse(ctx, parts, kids, cdict)

    def _make_coarse(self, ctx, parts, kids, cdict) -> _Coarse:
        w_base = self.crossing_weight(parts)
        at_proj = _proj_masks(parts, ctx.adh_mask)
        items = []
        for c in kids:
            a = ctx.child_adh[c]
            ckey = _proj_masks(parts, a)
            w_adh = self.crossing_weight(ckey)
            items.append((c, ckey, len(ckey), w_adh))
        co = _Coarse(parts, len(parts), w_base, at_proj, tuple(items))
        cdict[parts] = co
        return co

    # .. nice decomposition machinery (oversized bags) ..

    def component_adjacency(self, ctx: _NodeCtx, comps: list[int]) -> list[set[int]]:
        n = len(comps)
        adj: list[set[int]] = [set() for _ in range(n)]

        def owner(v: int) -> int:
            for i, c in enumerate(comps):
                if c >> v & 1:
                    return i
            return -1

        for u, v, _ in ctx.gamma_edges:
            iu, iv = owner(u), owner(v)
            if iu >= 0 and iv >= 0 and iu != iv:
                adj[iu].add(iv)
                adj[iv].add(iu)
        for a in ctx.adhesions:
            touched = [i for i, c in enumerate(comps) if c & a]
            for i in touched:
                for j in touched:
                    if i != j:
                        adj[i].add(j)
        return adj

    def big_candidates(self, ctx: _NodeCtx, comps: list[int]) -> list[NiceDecomposition]:
        """Nice decompositions for an oversized bag.

        All component subsets of size at most 2k-1 form a covering family
        for any avoid budget, so the quadratic-size hash family from the
        splitter module is not needed at this scale.  Results depend only
        on the component partition and are memoized on it.
        """
        cache_key = (ctx.node, tuple(comps))
        cached = self._cand_cache.get(cache_key)
        if cached is not None:
            return cached
        k = self.k
        adjacency = self.component_adjacency(ctx, comps)
        out: list[NiceDecomposition] = []
        seen: set[tuple] = set()
        idx = list(range(len(comps)))
        for r in range(0, min(2 * k - 1, len(idx)) + 1):
            for pick in combinations(idx, r):
                nd = self._assemble(ctx, comps, adjacency, set(pick))
                if nd is None:
                    continue
                key = (nd.pprime, nd.qtilde, nd.center)
                if key in seen:
                    continue
                seen.add(key)
                validate_nice_decomposition(nd, ctx.bag_mask, ctx.bag_edges, ctx.adhesions, k)
                out.append(nd)
        self._cand_cache[cache_key] = out
        return out

    def _assemble(self, ctx: _NodeCtx, comps: list[int], adj: list[set[int]], pick: set[int]) -> NiceDecomposition | None:
        q1 = 0
        for i, c in enumerate(comps):
            if i not in pick:
                q1 |= c
        visited: set[int] = set()
        groups: list[list[int]] = []
        for i in sorted(pick):
            if i in visited:
                continue
            stack = [i]
            visited.add(i)
            grp = []
            while stack:
                a = stack.pop()
                grp.append(a)
                for b in adj[a]:
                    if b in pick and b not in visited:
                        visited.add(b)
                        stack.append(b)
            groups.append(sorted(grp))
        center = q1
        satellites: list[list[int]] = []
        for grp in groups:
            if len(grp) > 2 * self.k - 1:
                for i in grp:
                    center |= comps[i]
            else:
                satellites.append(grp)
        qt_parts = [center] if center else []
        pp_parts = [center] if center else []
        for grp in satellites:
            pp_parts.append(sum(comps[i] for i in grp))
            qt_parts.extend(comps[i] for i in grp)
        center_b = center & ctx.bag_mask
        if not center_b:
            return None
        pp = _proj_masks(pp_parts, ctx.bag_mask)
        qt = _proj_masks(qt_parts, ctx.bag_mask)
        return NiceDecomposition(pp, qt, center_b)

    def skeleton_for(self, ctx: _NodeCtx, nd: NiceDecomposition) -> _Skeleton | None:
        """Levels plus child assignment for one nice decomposition."""
        cache_key = (ctx.node, nd.pprime, nd.qtilde, nd.center)
        if cache_key in self._skel_cache:
            return self._skel_cache[cache_key]
        skel = self._skeleton_for(ctx, nd)
        self._skel_cache[cache_key] = skel
        return skel

    def _skeleton_for(self, ctx: _NodeCtx, nd: NiceDecomposition) -> _Skeleton | None:
        satellites = sorted(p for p in nd.pprime if p != nd.center)
        if nd.center:
            level_masks = [nd.center] + [nd.center | p for p in satellites]
        else:
            level_masks = [ctx.bag_mask]
        assign: list[list[int]] = [[] for _ in level_masks]
        for c in ctx.children:
            a = ctx.child_adh[c]
            if a == 0:
                raise AssertionError("empty child adhesion under a connected graph")
            home = 0
            if nd.center:
                hits = [li for li, p in enumerate(satellites) if a & p]
                if len(hits) > 1:
                    return None
                if hits:
                    if a & ~(nd.center | satellites[hits[0]]):
                        return None
                    home = hits[0] + 1
                elif a & ~nd.center:
                    return None
            assign[home].append(c)

        skel = _Skeleton([], nd.center)
        for li, mask in enumerate(level_masks):
            pieces = tuple(sorted(q & mask for q in nd.qtilde if q & mask))
            kids = tuple(assign[li])
            lvl = _Level(mask, check_at=ctx.adh_mask & ~mask == 0, childless=not kids)
            for parts in self.groupings_of(pieces):
                lvl.add(self.coarse(ctx, parts, kids))
            skel.levels.append(lvl)
        skel.seal()
        return skel

    # .. per-node skeleton assembly ..

    def _node_skeletons(self, t: int, tree: tuple[tuple[int, int], ...]) -> list[_Skeleton]:
        ctx = self.ctxs[t]
        proj = project_tree(tree, ctx.bag)
        verts = sorted(proj.vertices)
        m = len(proj.edges)
        cap = min(guess_budget(self.k), m)
        comp_table = _component_table(verts, proj.edges)
        full = (1 << m) - 1
        skels: list[_Skeleton] = []
        if ctx.small:
            # Single merged skeleton; its value is monotone under guess
            # enlargement, so only maximal guesses are generated.
            kids = tuple(ctx.children)
            lvl = _Level(ctx.bag_mask, check_at=True, childless=not kids)
            skel = _Skeleton([lvl], 0)
            seen = skel.seen_parts
            cdict = self.coarse_dict(t, kids)
            groupings_of = self.groupings_of
            for guess in combinations(range(m), cap):
                kept = full
                for gi in guess:
                    kept ^= 1 << gi
                comps = comp_table[kept]
                if len(comps) > 2 * self.k - 1:
                    continue
                pieces = _proj_masks(comps, ctx.bag_mask)
                for parts in groupings_of(pieces):
                    if parts in seen:
                        continue
                    seen.add(parts)
                    co = cdict.get(parts)
                    if co is None:
                        co = self._make_coarse(ctx, parts, kids, cdict)
                    lvl.add(co)
            if lvl.coarsenings:
                skel.seal()
                skels.append(skel)
            return skels
        seen_nd: set[tuple] = set()
        for r in range(cap + 1):
            for guess in combinations(range(m), r):
                kept = full
                for gi in guess:
                    kept ^= 1 << gi
                comps = comp_table[kept]
                for nd in self.big_candidates(ctx, list(comps)):
                    key = (nd.pprime, nd.qtilde, nd.center)
                    if key in seen_nd:
                        continue
                    seen_nd.add(key)
                    skel = self.skeleton_for(ctx, nd)
                    if skel is not None:
                        skels.append(skel)
        return skels


def _component_table(verts: list[int], edges: Sequence[ProjEdge]) -> list[tuple[int, ...]]:
    """Component partitions for every kept-edge subset of a projected tree.

    Entry ``table[kept]`` is the sorted component masks after deleting the
    edges outside ``kept``; built bottom-up by merging one edge at a time.
    """
    m = len(edges)
    base = tuple(sorted(1 << v for v in verts))
    table: list[tuple[int, ...] | None] = [None] * (1 << m)
    table[0] = base
    for kept in range(1, 1 << m):
        low = (kept & -kept).bit_length() - 1
        prev = table[kept ^ (1 << low)]
        e = edges[low]
        bu, bv = 1 << e.u, 1 << e.v
        merged: list[int] = []
        block = 0
        for c in prev:
            if c & bu or c & bv:
                block |= c
            else:
                merged.append(c)
        merged.append(block)
        merged.sort()
        table[kept] = tuple(merged)
    return table  # type: ignore[return-value]


class TreeCutDP:
    """One bottom-up pass for a fixed spanning tree over a fixed
    decomposition at a fixed cut budget.

    Structure (skeletons, coarsenings, adhesion families) comes from the
    shared engine; this object owns only the budget-clamped value tables."""

    def __init__(self, engine: _Engine, tree: Sequence[tuple[int, int]], s: int):
        self.e = engine
        self.s = s
        self.tree = tuple(tree)
        self.tables: dict[int, dict[tuple[MaskPartition, int], tuple[int, object]]] = {}
        self.skels, self._families = engine.tree_data(self.tree)
        self.states = 0

    def adhesion_family(self, t: int) -> frozenset[MaskPartition]:
        return self._families[t]

    # .. evaluation ..

    def _eval(self, skel: _Skeleton, pa: MaskPartition, i: int):
        if skel.static:
            key = (pa, i, self.s)
            if key in skel.memo:
                return skel.memo[key]
            got = self._eval_inner(skel, pa, i)
            skel.memo[key] = got
            return got
        return self._eval_inner(skel, pa, i)

    def _eval_inner(self, skel: _Skeleton, pa: MaskPartition, i: int):
        k, s = self.e.k, self.s
        rows = []
        for lvl in skel.levels:
            row: dict[int, tuple[int, object]] = {}
            if lvl.childless:
                at = pa if lvl.check_at else None
                for r in range(1, i + 1):
                    ent = lvl.best.get((at, r))
                    if ent is not None and ent[0] <= s:
                        row[r] = (ent[0], (ent[1], ()))
                if not row:
                    return None
                rows.append(row)
                continue
            for co in lvl.candidates(pa):
                if co.nparts > i or co.w_base > s:
                    continue
                nu: dict[int, tuple[int, tuple]] = {co.nparts: (co.w_base, ())}
                for child, ckey, b, w_adh in co.child_items:
                    ctab = self.tables[child]
                    nu2: dict[int, tuple[int, tuple]] = {}
                    for r0, (v0, tr0) in nu.items():
                        for ic in range(b, k + 1):
                            r1 = r0 + ic - b
                            if r1 > i:
                                break
                            ent = ctab.get((ckey, ic))
                            if ent is None:
                                continue
                            v1 = v0 + ent[0] - w_adh
                            if v1 > s:
                                continue
                            cur = nu2.get(r1)
                            if cur is None or v1 < cur[0]:
                                nu2[r1] = (v1, tr0 + ((child, ckey, ic),))
                    nu = nu2
                    if not nu:
                        break
                for r, (v, tr) in nu.items():
                    cur = row.get(r)
                    if cur is None or v < cur[0]:
                        row[r] = (v, (co, tr))
            if not row:
                return None
            rows.append(row)
        acc = {j: (v, [tr]) for j, (v, tr) in rows[0].items()}
        for extra in rows[1:]:
            nxt: dict[int, tuple[int, list]] = {}
            for j0, (v0, chain0) in acc.items():
                for j1, (v1, tr1) in extra.items():
                    j = j0 + j1 - 1  # the center part is shared
                    if j > i:
                        continue
                    v = v0 + v1
                    if v > s:
                        continue
                    cur = nxt.get(j)
                    if cur is None or v < cur[0]:
                        nxt[j] = (v, chain0 + [tr1])
            acc = nxt
            if not acc:
                return None
        return acc.get(i)

    # .. node driver ..

    def run(self) -> dict[tuple[MaskPartition, int], tuple[int, object]]:
        for t in self.e.td.post_order():
            self.solve_node(t)
        return self.tables[self.e.td.root]

    def solve_node(self, t: int) -> None:
        k = self.e.k
        skels = self.skels[t]
        table: dict[tuple[MaskPartition, int], tuple[int, object]] = {}
        for pa in sorted(self.adhesion_family(t)):
            for i in range(1, k + 1):
                best = None
                for si, skel in enumerate(skels):
                    got = self._eval(skel, pa, i)
                    if got is None:
                        continue
                    v, chain = got
                    if best is None or v < best[0]:
                        best = (v, (si, chain))
                if best is not None:
                    table[(pa, i)] = best
                self.states += 1
        self.tables[t] = table

    # .. traceback ..

    def reconstruct(self, t: int, pa: MaskPartition, i: int) -> MaskPartition:
        """Rebuild the witnessing partition of gamma(t); verifies itself."""
        ctx = self.e.ctxs[t]
        value, (si, chain) = self.tables[t][(pa, i)]
        skel = self.skels[t][si]
        assert len(chain) == len(skel.levels)
        acc_parts: list[int] = []
        for lvl, (co, child_choices) in zip(skel.levels, chain):
            parts = list(co.parts)
            for child, ckey, ic in child_choices:
                sub = self.reconstruct(child, ckey, ic)
                amask = ctx.child_adh[child]
                for cp in sub:
                    tr = cp & amask
                    if tr:
                        for j, q in enumerate(parts):
                            if q & amask == tr:
                                parts[j] = q | cp
                                break
                        else:
                            raise AssertionError("child part has no gluing partner")
                    else:
                        parts.append(cp)
            if skel.center:
                if not acc_parts:
                    acc_parts = parts
                else:
                    host = next(j for j, q in enumerate(acc_parts) if q & skel.center)
                    for q in parts:
                        if q & skel.center:
                            acc_parts[host] |= q
                        else:
                            acc_parts.append(q)
            else:
                acc_parts = parts
        total = 0
        for q in acc_parts:
            assert total & q == 0, "reconstructed parts overlap"
            total |= q
        assert total == ctx.gamma_mask, "reconstructed partition misses vertices"
        assert len(acc_parts) == i
        assert _proj_masks(acc_parts, ctx.adh_mask) == pa
        w = self.e.crossing_weight(tuple(sorted(acc_parts)))
        assert w == value, f"traceback weight {w} != table value {value}"
        return tuple(sorted(acc_parts))


# -- public operations --------------------------------------------------------


@dataclass(frozen=True)
class ExactResult:
    feasible: bool
    value: int | None
    partition: Partition | None
    trees_tried: int
    dp_states: int


def _tree_family(g: MultiGraph, k: int, trees: TreeFamily | None) -> TreeFamily:
    if trees is not None:
        return trees
    if g.n <= 10:
        return enumerate_spanning_trees(g, cap=DEFAULT_TREE_CAP)
    count = min(200, max(1, math.ceil(k**3 * math.log(g.m + 2))))
    return pack_trees(g, count)


def _check_exact_inputs(g: MultiGraph, k: int, s: int) -> None:
    if g.mode != MULTI:
        raise InvalidInputError("the exact solver expects an unweighted multigraph")
    if not 1 <= k <= g.n:
        raise InvalidInputError("k must lie between 1 and the vertex count")
    if s < 0:
        raise InvalidInputError("the cut budget must be nonnegative")
    if not is_connected(g):
        raise InvalidInputError("the exact solver expects a connected graph")


def solve_exact(
    g: MultiGraph,
    k: int,
    s: int,
    trees: TreeFamily | None = None,
    mode: str = "decide",
) -> ExactResult:
    """Decide whether g has a k-cut of weight at most s; optionally build one.

    Runs the decomposition DP once per family tree, stopping at the first
    tree that witnesses a cut of weight at most s.  A ``yes`` in construct
    mode carries a partition whose recomputed weight equals the value.
    """
    _check_exact_inputs(g, k, s)
    if mode not in ("decide", "construct"):
        raise InvalidInputError(f"unknown mode {mode!r}")
    fam = _tree_family(g, k, trees)
    td = _cached_decomposition(g, s)
    engine = _cached_engine(g, td, k, s)
    states = 0
    for ti in range(len(fam)):
        dp = TreeCutDP(engine, fam.tree_edges(ti), s)
        root = dp.run()
        states += dp.states
        ent = root.get(((), k))
        if ent is not None and ent[0] <= s:
            masks = dp.reconstruct(td.root, (), k)
            partition = unmask_partition(masks) if mode == "construct" else None
            if partition is not None:
                assert cut_weight(g, partition) == ent[0]
            return ExactResult(True, ent[0], partition, ti + 1, states)
    return ExactResult(False, None, None, len(fam), states)


def exact_values(
    g: MultiGraph,
    kmax: int,
    s_cap: int,
    trees: TreeFamily | None = None,
    construct: bool = False,
    stats_out: dict | None = None,
) -> list[tuple[int | None, Partition | None]]:
    """Minimum cut weights (and witnesses) for every part count 1..kmax.

    One DP pass per tree with the budget clamped at ``s_cap`` fills the
    whole vector; entries stay None where no cut of weight <= s_cap exists.
    Index 0 is unused.
    """
    _check_exact_inputs(g, max(1, min(kmax, g.n)), s_cap)
    kmax = min(kmax, g.n)
    fam = _tree_family(g, kmax, trees)
    td = _cached_decomposition(g, s_cap)
    engine = _cached_engine(g, td, kmax, s_cap)
    best: list[tuple[int | None, Partition | None]] = [(None, None)] * (kmax + 1)
    states = 0
    for ti in range(len(fam)):
        dp = TreeCutDP(engine, fam.tree_edges(ti), s_cap)
        root = dp.run()
        states += dp.states
        for i in range(1, kmax + 1):
            ent = root.get(((), i))
            if ent is not None and (best[i][0] is None or ent[0] < best[i][0]):
                masks = dp.reconstruct(td.root, (), i)  # self-check
                part = unmask_partition(masks) if construct else None
                best[i] = (ent[0], part)
    if stats_out is not None:
        stats_out["trees"] = stats_out.get("trees", 0) + len(fam)
        stats_out["states"] = stats_out.get("states", 0) + states
    return best


def compute_state(
    g: MultiGraph,
    td: TreeDecomposition,
    tree: Sequence[tuple[int, int]],
    t: int,
    key: tuple[Partition, int],
    child_tables: dict[int, dict[tuple[Partition, int], int]],
    s: int,
    k: int,
) -> int | None:
    """Single DP state f_t(key) given complete child tables; None plays the
    role of infinity (no realizing partition of weight at most s)."""
    dp = _prepared_dp(g, td, tree, k, s, child_tables)
    for c in td.children(t):
        if c not in dp.tables:
            raise InvalidInputError(f"child table for node {c} missing")
    dp.solve_node(t)
    pa, i = mask_partition(key[0]), key[1]
    ent = dp.tables[t].get((pa, i))
    return None if ent is None else ent[0]


def cut_guess_value(
    g: MultiGraph,
    td: TreeDecomposition,
    tree: Sequence[tuple[int, int]],
    t: int,
    key: tuple[Partition, int],
    cprime: Iterable[int],
    child_tables: dict[int, dict[tuple[Partition, int], int]],
    s: int,
    k: int,
) -> int | None:
    """Value of the DP state under one fixed guess of crossed projection
    edges (indices into the bag projection's edge list); an upper bound on
    the true state value, tight for the right guess."""
    dp = _prepared_dp(g, td, tree, k, s, child_tables)
    ctx = dp.e.ctxs[t]
    pa, i = mask_partition(key[0]), key[1]
    best = None
    for nd in nice_decompositions(g, td, tree, t, cprime, s, k, _dp=dp):
        skel = dp.e.skeleton_for(ctx, nd)
        if skel is None:
            continue
        got = dp._eval(skel, pa, i)
        if got is not None and (best is None or got[0] < best):
            best = got[0]
    return best


def nice_decompositions(
    g: MultiGraph,
    td: TreeDecomposition,
    tree: Sequence[tuple[int, int]],
    t: int,
    cprime: Iterable[int],
    s: int,
    k: int,
    _dp: TreeCutDP | None = None,
) -> list[NiceDecomposition]:
    """Candidate nice decompositions for one guess of crossed edges."""
    dp = _dp if _dp is not None else TreeCutDP(_Engine(g, td, k, s), tree, s)
    ctx = dp.e.ctxs[t]
    proj = project_tree(tree, ctx.bag)
    comps = _tree_components(sorted(proj.vertices), proj.edges, set(cprime))
    if ctx.small:
        if len(comps) > 2 * k - 1:
            return []
        qt = _proj_masks(comps, ctx.bag_mask)
        nd = NiceDecomposition((ctx.bag_mask,), qt, 0)
        validate_nice_decomposition(nd, ctx.bag_mask, ctx.bag_edges, ctx.adhesions, k)
        return [nd]
    return dp.e.big_candidates(ctx, comps)


def knapsack_value(
    g: MultiGraph,
    td: TreeDecomposition,
    tree: Sequence[tuple[int, int]],
    t: int,
    key: tuple[Partition, int],
    nd: NiceDecomposition,
    child_tables: dict[int, dict[tuple[Partition, int], int]],
    s: int,
    k: int,
) -> int | None:
    """Knapsack composition value for one nice decomposition of the bag."""
    dp = _prepared_dp(g, td, tree, k, s, child_tables)
    ctx = dp.e.ctxs[t]
    skel = dp.e.skeleton_for(ctx, nd)
    if skel is None:
        return None
    pa, i = mask_partition(key[0]), key[1]
    got = dp._eval(skel, pa, i)
    return None if got is None else got[0]


def _prepared_dp(g, td, tree, k, s, child_tables) -> TreeCutDP:
    dp = TreeCutDP(_Engine(g, td, k, s), tree, s)
    for c, tab in child_tables.items():
        converted: dict[tuple[MaskPartition, int], tuple[int, object]] = {}
        for (p, i), v in tab.items():
            converted[(mask_partition(p), i)] = (v, None)
        dp.tables[c] = converted
    return dp
