"""Ground truth: the exact commutativity predicate, brute force, original DECOR.

``is_commutative`` compares every row with its canonical representative,
the row obtained by sorting the values at the subset's positions into range
order.  Two rows related by a permutation of those positions share one
canonical row, so the factor is invariant under all such permutations iff
each row agrees with its canonical row.

``original_decor`` reproduces the unverified bucket-intersection procedure
that the corrected algorithm replaces.  It can return argument sets that are
not commutative and exists to keep that failure reproducible.
"""

from __future__ import annotations

import itertools
import time
from typing import Iterable

import numpy as np

from .buckets import BucketIndex, classes_of, mask_to_positions
from .core import Assignment, Factor
from .errors import BudgetExceeded, MixedRanges, SubsetTooSmall
from .result import CommutativeResult, PhaseTiming, check_deadline, elapsed_ms

DEFAULT_SUBSET_BUDGET = 2**20


def _validated(factor: Factor, subset: Iterable[int]) -> list[int]:
    pos = sorted(set(subset))
    if len(pos) < 2:
        raise SubsetTooSmall(f"commutativity needs at least 2 arguments, got {pos}")
    for p in pos:
        if not 0 <= p < factor.arity:
            raise IndexError(f"position {p} out of range for factor {factor.name}")
    ranges = {factor.args[p].range for p in pos}
    if len(ranges) != 1:
        raise MixedRanges(f"arguments {factor.arg_names(pos)} do not share one range")
    return pos


def _bit_fields(factor: Factor) -> bool:
    """True if every argument occupies its own bit field of the row index."""
    return all(size & (size - 1) == 0 for size in factor.shape)


def _canonical_rows(factor: Factor, pos: list[int]) -> np.ndarray:
    """Row index of each row with its values at ``pos`` sorted ascending.

    The sorted block is fixed by how many positions hold a value below
    each threshold t, so its row offset is a sum of stride suffix sums.
    """
    A = factor.assignments
    strides = [factor.strides[p] for p in pos]
    suffix = np.r_[np.cumsum(strides[::-1])[::-1], 0].astype(np.int64)
    rows = np.arange(len(A), dtype=np.int64)
    if factor.args[pos[0]].range.size == 2 and _bit_fields(factor) and hasattr(np, "bitwise_count"):
        # each block argument is a single bit of the row index
        block_bits = rows & sum(strides)
        zeros = len(pos) - np.bitwise_count(block_bits)
        return rows - block_bits + suffix[zeros]
    canon = rows.copy()
    for p, stride in zip(pos, strides):
        canon -= A[:, p].astype(np.int64) * stride
    for t in range(1, factor.args[pos[0]].range.size):
        below = np.zeros(len(A), dtype=np.int64)
        for p in pos:
            below += A[:, p] < t
        canon += suffix[below]
    return canon


def is_commutative(factor: Factor, subset: Iterable[int]) -> bool:
    pos = _validated(factor, subset)
    canon = _canonical_rows(factor, pos)
    return bool(np.array_equal(factor.codes, factor.codes[canon]))


def find_witness(factor: Factor, subset: Iterable[int]) -> tuple[Assignment, Assignment] | None:
    """First row whose potential differs from a permuted copy of itself."""
    pos = _validated(factor, subset)
    canon = _canonical_rows(factor, pos)
    bad = np.flatnonzero(factor.codes != factor.codes[canon])
    if not len(bad):
        return None
    r = int(bad[0])
    A = factor.assignments
    return tuple(int(x) for x in A[r]), tuple(int(x) for x in A[canon[r]])


def is_commutative_pair(factor: Factor, i: int, j: int) -> bool:
    """Swap-invariance scan of positions ``i`` and ``j``."""
    if i == j:
        raise SubsetTooSmall("a pair needs two distinct positions")
    if factor.args[i].range != factor.args[j].range:
        raise MixedRanges(f"{factor.args[i].name} and {factor.args[j].name} differ in range")
    t = factor.codes.reshape(factor.shape)
    return bool(np.array_equal(t, np.swapaxes(t, i, j)))


def subset_count(factor: Factor) -> int:
    """Number of subsets of size >= 2 that brute force may examine."""
    return sum(2**c.size - c.size - 1 for c in classes_of(factor))


def brute_force(
    factor: Factor,
    budget: int | None = DEFAULT_SUBSET_BUDGET,
    deadline: float | None = None,
) -> CommutativeResult:
    """Check every same-range subset, largest first."""
    start = time.perf_counter()
    if budget is not None and subset_count(factor) > budget:
        raise BudgetExceeded(f"{subset_count(factor)} subsets exceed the budget of {budget}")
    classes = classes_of(factor)
    checks = 0
    found: list[tuple[int, ...]] = []
    top = max(c.size for c in classes)
    for k in range(top, 1, -1):
        for cls in classes:
            if cls.size < k:
                continue
            for subset in itertools.combinations(cls.positions, k):
                check_deadline(deadline)
                checks += 1
                if is_commutative(factor, subset):
                    found.append(subset)
        if found:
            break
    total = elapsed_ms(start)
    timing = PhaseTiming(0.0, total, total, checks)
    return CommutativeResult(tuple(found), "brute", timing, checks)


def original_decor(factor: Factor, deadline: float | None = None) -> tuple[int, ...]:
    """Intersect, across buckets, the positions emptied by identical-potential groups.

    No verification is performed; the result may be wrong by design.
    """
    classes = classes_of(factor)
    if len(classes) != 1:
        raise MixedRanges("original DECOR is defined for factors whose arguments share one range")
    index = BucketIndex(factor, classes[0])
    result = classes[0].mask
    for b in range(len(index)):
        check_deadline(deadline)
        if not index.qualifies(b):
            continue
        bucket_mask = 0
        for m in index.group_masks_of(b):
            bucket_mask |= int(m)
        result &= bucket_mask
        if not result:
            break
    return mask_to_positions(result)
