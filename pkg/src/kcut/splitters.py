"""Perfect-hash splitter families and the derived subset-covering families.

A splitter maps the ground set into a quadratic number of buckets so that
every small subset lands injectively under at least one family member.  From
splitters we derive families of subsets that can "capture X1 while dodging
X2" for all disjoint small pairs (X1, X2); the dynamic program uses those to
guess which projected tree edges an optimal solution cuts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .graph import InvalidInputError


def _next_prime(x: int) -> int:
    def is_prime(v: int) -> bool:
        if v < 2:
            return False
        f = 2
        while f * f <= v:
            if v % f == 0:
                return False
            f += 1
        return True

    while not is_prime(x):
        x += 1
    return x


@dataclass(frozen=True)
class SplitterFamily:
    """Functions [n] -> [range_size] splitting every subset_size-subset.

    Stored as explicit value tables.  For ``range_size = subset_size ** 2``
    the "even split" condition degenerates to injectivity: every bucket can
    hold at most one element of the subset.
    """

    n: int
    subset_size: int
    range_size: int
    functions: tuple[tuple[int, ...], ...]

    def splits(self, subset: Iterable[int]) -> bool:
        sub = sorted(subset)
        for f in self.functions:
            if len({f[j] for j in sub}) == len(sub):
                return True
        return False


def build_splitter(n: int, kk: int) -> SplitterFamily:
    """An (n, kk, kk^2) splitter via single-level perfect hashing.

    Uses ``x -> ((a * x) mod p) mod kk^2`` over all multipliers ``a`` for a
    prime ``p >= max(n, kk^3 + 2)``.  Counting collisions per pair shows some
    multiplier is injective on every fixed kk-subset once ``p > kk^3``, which
    is why the prime is pushed above the classical ``max(n, kk^2)`` choice.
    Size O(max(n, kk^3)) instead of polylogarithmic, which is all the rest of
    the pipeline ever relies on.
    """
    if n < 1 or kk < 1:
        raise InvalidInputError("splitter parameters must be positive")
    ell = kk * kk
    if kk == 1:
        return SplitterFamily(n, 1, 1, ((0,) * n,))
    if kk >= n:
        # Any injection works; identity into the (larger) bucket range.
        return SplitterFamily(n, kk, ell, (tuple(j % ell for j in range(n)),))
    p = _next_prime(max(n, kk**3 + 2))
    functions = tuple(
        tuple((a * j) % p % ell for j in range(n)) for a in range(1, p)
    )
    return SplitterFamily(n, kk, ell, functions)


@dataclass(frozen=True)
class SubsetFamily:
    """Subsets of S hitting every (X1, X2) pattern: for all disjoint X1, X2
    with |X1| <= s1 and |X2| <= s2 some member contains X1 and avoids X2."""

    ground: tuple[int, ...]
    s1: int
    s2: int
    sets: tuple[frozenset[int], ...]

    def covers(self, x1: Iterable[int], x2: Iterable[int]) -> bool:
        a, b = frozenset(x1), frozenset(x2)
        return any(a <= s and not (b & s) for s in self.sets)


def build_subset_family(
    ground: Sequence[int], s1: int, s2: int, method: str = "auto"
) -> SubsetFamily:
    """Build a covering subset family over ``ground``.

    ``splitter`` runs the hash-family construction: for every pair of
    admissible pattern sizes it builds a splitter and emits, per function,
    the preimages of every small bucket set.  ``enumerate`` returns all
    subsets of size at most s1, which covers trivially (X1 itself is a
    member).  ``auto`` picks whichever is smaller to generate; both satisfy
    the same covering contract, so downstream callers never notice.
    """
    items = tuple(sorted(set(ground)))
    n = len(items)
    if s1 < 0 or s2 < 0:
        raise InvalidInputError("pattern sizes must be nonnegative")
    if s1 >= n:
        raise InvalidInputError("s1 must be smaller than the ground set")
    s2 = min(s2, n)  # larger avoid-sets cannot occur

    if method == "auto":
        method = "enumerate" if _enum_cost(n, s1) <= _splitter_cost(n, s1, s2) else "splitter"
    if method == "enumerate":
        masks: list[frozenset[int]] = []
        for size in range(0, s1 + 1):
            masks.extend(frozenset(c) for c in combinations(items, size))
        sets = tuple(masks)
    elif method == "splitter":
        seen: set[frozenset[int]] = {frozenset()}
        for s1p in range(1, s1 + 1):
            for s2p in range(1, s2 + 1):
                sp = s1p + s2p
                if sp > n:
                    continue
                fam = build_splitter(n, sp)
                for f in fam.functions:
                    buckets: dict[int, list[int]] = {}
                    for j, val in enumerate(f):
                        buckets.setdefault(val, []).append(items[j])
                    nonempty = sorted(buckets)
                    empties = fam.range_size - len(nonempty)
                    # Choosing an empty bucket never changes the emitted set,
                    # so enumerate only nonempty choices and pad with empties.
                    for used in range(0, s1p + 1):
                        if s1p - used > empties:
                            continue
                        for combo in combinations(nonempty, used):
                            seen.add(frozenset(x for b in combo for x in buckets[b]))
        sets = tuple(sorted(seen, key=lambda s: (len(s), sorted(s))))
    else:
        raise InvalidInputError(f"unknown construction {method!r}")
    return SubsetFamily(items, s1, s2, sets)


def _enum_cost(n: int, s1: int) -> int:
    return sum(math.comb(n, i) for i in range(s1 + 1))


def _splitter_cost(n: int, s1: int, s2: int) -> int:
    total = 0
    for s1p in range(1, s1 + 1):
        for s2p in range(1, min(s2, n - s1p) + 1):
            sp = s1p + s2p
            p = max(n, sp**3 + 2)
            total += p * min(math.comb(sp * sp, s1p), 2 * _enum_cost(n, s1p))
    return total
