"""Bottom-up detection from commutative pairs.

Both detectors start from the layer of commutative argument pairs.  Since a
set of same-range arguments is commutative exactly when all of its pairs
are, larger sets never need another table scan: A-DECOR grows them level by
level from the pair layer, CC-DECOR merges overlapping pairs with
union-find and reads off connected components.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from .buckets import ArgClass, classes_of
from .core import Factor
from .reference import is_commutative_pair
from .result import CommutativeResult, PhaseTiming, Subset, check_deadline, elapsed_ms, maximum_subsets


@dataclass(frozen=True)
class PairLayer:
    pairs: frozenset[tuple[int, int]]
    checks: int = 0

    def __contains__(self, pair) -> bool:
        i, j = pair
        return (min(i, j), max(i, j)) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))


class UnionFind:
    """Disjoint sets over ``0..n-1`` with union by rank and path compression."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True

    def components(self) -> list[tuple[int, ...]]:
        groups: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            groups.setdefault(self.find(x), []).append(x)
        return sorted(tuple(g) for g in groups.values())


def pairwise_layer(factor: Factor, cls: ArgClass, deadline: float | None = None) -> PairLayer:
    """Swap-check every pair of the class: exactly C(m, 2) scans."""
    pairs = set()
    checks = 0
    for i, j in itertools.combinations(cls.positions, 2):
        check_deadline(deadline)
        checks += 1
        if is_commutative_pair(factor, i, j):
            pairs.add((i, j))
    return PairLayer(frozenset(pairs), checks)


def _extend(layer: set[Subset], pairs: PairLayer, positions: tuple[int, ...], deadline) -> set[Subset]:
    nxt: set[Subset] = set()
    for c in layer:
        check_deadline(deadline)
        members = set(c)
        for r in positions:
            if r in members:
                continue
            if all((min(r, q), max(r, q)) in pairs.pairs for q in c):
                nxt.add(tuple(sorted(c + (r,))))
    return nxt


def a_decor(factor: Factor, deadline: float | None = None) -> CommutativeResult:
    """Apriori-style growth of commutative sets from the pair layer."""
    start = time.perf_counter()
    checks = 0
    per_class: dict[Subset, tuple[Subset, ...]] = {}
    for cls in classes_of(factor):
        if cls.size < 2:
            continue
        pairs = pairwise_layer(factor, cls, deadline)
        checks += pairs.checks
        layer: set[Subset] = set(pairs.pairs)
        while layer:
            nxt = _extend(layer, pairs, cls.positions, deadline)
            if not nxt:
                break
            layer = nxt
        per_class[cls.positions] = tuple(sorted(layer))
    total = elapsed_ms(start)
    best = maximum_subsets(s for subs in per_class.values() for s in subs)
    return CommutativeResult(best, "a-decor", PhaseTiming(total, 0.0, total, 0), checks, per_class)


def cc_decor(factor: Factor, deadline: float | None = None) -> CommutativeResult:
    """Connected components of the commutative-pair graph."""
    start = time.perf_counter()
    checks = 0
    per_class: dict[Subset, tuple[Subset, ...]] = {}
    for cls in classes_of(factor):
        if cls.size < 2:
            continue
        pairs = pairwise_layer(factor, cls, deadline)
        checks += pairs.checks
        uf = UnionFind(factor.arity)
        for i, j in pairs:
            uf.union(i, j)
        comps = [c for c in uf.components() if len(c) >= 2]
        per_class[cls.positions] = maximum_subsets(comps)
    total = elapsed_ms(start)
    best = maximum_subsets(s for subs in per_class.values() for s in subs)
    return CommutativeResult(best, "cc-decor", PhaseTiming(total, 0.0, total, 0), checks, per_class)
