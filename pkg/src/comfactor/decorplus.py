"""DECOR+: bucket-driven candidate pruning followed by exact verification.

Each argument class is handled on its own.  Starting from the whole class,
every qualifying bucket contributes the argument sets emptied by its groups
of identical potentials; the running candidates are cross-intersected with
them.  Whatever survives is verified level by level, largest subsets first.
"""

from __future__ import annotations

import enum
import itertools
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .buckets import (
    ArgClass,
    BucketEntry,
    BucketIndex,
    PotentialGroup,
    classes_of,
    mask_to_positions,
)
from .core import Factor
from .reference import is_commutative
from .result import (
    CommutativeResult,
    PhaseTiming,
    Subset,
    check_deadline,
    elapsed_ms,
    maximum_subsets,
)


class Heuristic(str, enum.Enum):
    NONE = "none"
    SBF = "SBF"    # smallest bucket first
    LGF = "LGF"    # least groups first
    SCSF = "SCSF"  # smallest candidate set first
    SMCF = "SMCF"  # smallest minimal candidate first

    @classmethod
    def parse(cls, value: "str | Heuristic") -> "Heuristic":
        if isinstance(value, Heuristic):
            return value
        for h in cls:
            if h.value.lower() == str(value).lower():
                return h
        raise ValueError(f"unknown heuristic {value!r}; choose from {[h.value for h in cls]}")


@dataclass(frozen=True)
class DetectOptions:
    heuristic: Heuristic = Heuristic.NONE
    return_all: bool = True
    min_subset_size: int = 2

    def __post_init__(self) -> None:
        object.__setattr__(self, "heuristic", Heuristic.parse(self.heuristic))
        if self.min_subset_size < 2:
            raise ValueError("min_subset_size must be at least 2")


class CandidateSet:
    """Antichain of argument-position sets, stored as bitmasks."""

    def __init__(self, masks: Iterable[int] = ()) -> None:
        self._masks: list[int] = []
        for m in masks:
            self.add(m)

    def add(self, mask: int) -> bool:
        """Insert unless subsumed; drop members the new set subsumes."""
        for m in self._masks:
            if mask & m == mask:
                return False
        self._masks = [m for m in self._masks if m & mask != m]
        self._masks.append(mask)
        return True

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(self._masks)

    def subsets(self) -> tuple[Subset, ...]:
        return tuple(sorted(mask_to_positions(m) for m in self._masks))

    def max_size(self) -> int:
        return max((m.bit_count() for m in self._masks), default=0)

    def min_size(self) -> int:
        return min((m.bit_count() for m in self._masks), default=0)

    def __len__(self) -> int:
        return len(self._masks)

    def __bool__(self) -> bool:
        return bool(self._masks)

    def __eq__(self, other) -> bool:
        if isinstance(other, CandidateSet):
            return set(self._masks) == set(other._masks)
        return NotImplemented

    def __repr__(self) -> str:
        return f"CandidateSet({list(self.subsets())})"


@dataclass(frozen=True)
class BucketStep:
    """Trace record emitted once per bucket of the loop."""

    histogram: tuple[int, ...]
    size: int
    skipped: bool
    bucket_candidates: tuple[Subset, ...]
    candidates_after: tuple[Subset, ...]


Trace = Callable[[BucketStep], None]


def candidate_for_group(factor: Factor, group: PotentialGroup) -> set[int]:
    """Positions where the group's assignments do not all agree."""
    if len(group.rows) < 2:
        raise ValueError("a group needs at least two potentials")
    rows = factor.assignments[list(group.rows)]
    differ = (rows != rows[0]).any(axis=0)
    return {int(i) for i in np.flatnonzero(differ)}


def _bucket_candidates(index: BucketIndex, b: int, class_mask: int) -> CandidateSet:
    cands = CandidateSet()
    for m in np.unique(index.group_masks_of(b)):
        cands.add(int(m) & class_mask)
    return cands


def _sort_key(index: BucketIndex, b: int, h: Heuristic, class_mask: int):
    if h is Heuristic.SBF:
        return int(index.sizes[b])
    if h is Heuristic.LGF:
        return len(index.group_masks_of(b))
    if h is Heuristic.SCSF:
        return len(_bucket_candidates(index, b, class_mask))
    if h is Heuristic.SMCF:
        return _bucket_candidates(index, b, class_mask).min_size()
    return 0


def bucket_order(index: BucketIndex, heuristic: Heuristic | str) -> list[int]:
    h = Heuristic.parse(heuristic)
    ids = list(range(len(index)))
    if h is Heuristic.NONE:
        return ids
    class_mask = index.cls.mask
    return sorted(ids, key=lambda b: _sort_key(index, b, h, class_mask))


def order_buckets(
    factor: Factor, cls: ArgClass, entries: Sequence[BucketEntry], heuristic: Heuristic | str
) -> list[BucketEntry]:
    """Stable sort of bucket entries by the heuristic's key, ascending."""
    h = Heuristic.parse(heuristic)
    if h is Heuristic.NONE:
        return list(entries)
    index = BucketIndex(factor, cls)
    keys = {index.keys[b]: _sort_key(index, b, h, cls.mask) for b in range(len(index))}
    return sorted(entries, key=lambda e: keys[e.key])


def bucket_loop(
    factor: Factor,
    cls: ArgClass,
    options: DetectOptions = DetectOptions(),
    *,
    trace: Trace | None = None,
    deadline: float | None = None,
    index: BucketIndex | None = None,
) -> CandidateSet:
    """Prune the candidate subsets of one class; empty means nothing can commute.

    A bucket is skipped when it holds fewer than two potentials or when its
    histogram puts all class positions on a single value, since no
    permutation of the class can move such rows.
    """
    if index is None:
        index = BucketIndex(factor, cls)
    class_mask = cls.mask
    min_size = options.min_subset_size
    cand = CandidateSet([class_mask])
    for b in bucket_order(index, options.heuristic):
        check_deadline(deadline)
        if not index.qualifies(b):
            if trace:
                trace(BucketStep(index.keys[b], int(index.sizes[b]), True, (), cand.subsets()))
            continue
        local = _bucket_candidates(index, b, class_mask)
        if not local:
            if trace:
                trace(BucketStep(index.keys[b], int(index.sizes[b]), False, (), ()))
            return CandidateSet()
        merged = CandidateSet()
        for ci in cand.masks:
            for cj in local.masks:
                both = ci & cj
                if both.bit_count() >= min_size:
                    merged.add(both)
        cand = merged
        if trace:
            trace(BucketStep(index.keys[b], int(index.sizes[b]), False, local.subsets(), cand.subsets()))
        if not cand:
            return cand
    return cand


def tighter_bound(factor: Factor, cls: ArgClass) -> int:
    """Minimum over qualifying buckets of the largest per-bucket candidate."""
    index = BucketIndex(factor, cls)
    bound = cls.size
    for b in range(len(index)):
        if index.qualifies(b):
            bound = min(bound, _bucket_candidates(index, b, cls.mask).max_size())
    return bound


def _verify(
    factor: Factor,
    cands: CandidateSet,
    options: DetectOptions,
    deadline: float | None,
) -> tuple[list[Subset], int]:
    subsets = cands.subsets()
    checks = 0
    top = max((len(s) for s in subsets), default=0)
    for k in range(top, options.min_subset_size - 1, -1):
        level = sorted({c for s in subsets if len(s) >= k for c in itertools.combinations(s, k)})
        found = []
        for c in level:
            check_deadline(deadline)
            checks += 1
            if is_commutative(factor, c):
                found.append(c)
                if not options.return_all:
                    return found, checks
        if found:
            return found, checks
    return [], checks


def verify_candidates(
    factor: Factor,
    cands: CandidateSet,
    options: DetectOptions = DetectOptions(),
    *,
    deadline: float | None = None,
) -> set[Subset]:
    """Largest commutative subsets contained in some candidate."""
    found, _ = _verify(factor, cands, options, deadline)
    return set(found)


def decor_plus(
    factor: Factor,
    options: DetectOptions = DetectOptions(),
    *,
    trace: Trace | None = None,
    deadline: float | None = None,
) -> CommutativeResult:
    start = time.perf_counter()
    pruned = []
    for cls in classes_of(factor):
        if cls.size < options.min_subset_size:
            continue
        cands = bucket_loop(factor, cls, options, trace=trace, deadline=deadline)
        pruned.append((cls, cands))
    candidate_ms = elapsed_ms(start)

    mid = time.perf_counter()
    per_class: dict[Subset, tuple[Subset, ...]] = {}
    checks = 0
    for cls, cands in pruned:
        if not cands:
            per_class[cls.positions] = ()
            continue
        found, n = _verify(factor, cands, options, deadline)
        checks += n
        per_class[cls.positions] = tuple(sorted(found))
    verification_ms = elapsed_ms(mid)

    best = maximum_subsets(s for subs in per_class.values() for s in subs)
    if not options.return_all:
        best = best[:1]
    timing = PhaseTiming(candidate_ms, verification_ms, elapsed_ms(start), checks)
    return CommutativeResult(best, "decor+", timing, checks, per_class)
