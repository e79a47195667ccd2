"""Bucket partitions of a factor's potential table.

A bucket is keyed by the histogram of range values over one *argument
class* (all positions sharing a range).  For a class that does not cover
every argument, a bucket aggregates all rows whose class positions realise
the histogram, whatever the remaining arguments hold.

Histograms are enumerated in descending lexicographic order, which for a
class covering all arguments is also the order in which buckets first
appear in the table (``[3,0], [2,1], [1,2], [0,3]`` for three Boolean
arguments).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .core import Assignment, Factor, RangeSpec, index_to_assignment

Histogram = tuple[int, ...]


@dataclass(frozen=True)
class ArgClass:
    positions: tuple[int, ...]
    range: RangeSpec

    @property
    def size(self) -> int:
        return len(self.positions)

    @property
    def mask(self) -> int:
        return positions_to_mask(self.positions)


@dataclass(frozen=True)
class BucketEntry:
    key: Histogram
    rows: tuple[int, ...]
    potentials: tuple[str, ...]


@dataclass(frozen=True)
class PotentialGroup:
    """A maximal run of identical potentials inside one bucket."""

    token: str
    rows: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.rows)


def positions_to_mask(positions) -> int:
    m = 0
    for p in positions:
        m |= 1 << p
    return m


def mask_to_positions(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def classes_of(factor: Factor) -> list[ArgClass]:
    """Partition argument positions by range, ordered by first position."""
    groups: dict[RangeSpec, list[int]] = {}
    for i, arg in enumerate(factor.args):
        groups.setdefault(arg.range, []).append(i)
    return [ArgClass(tuple(pos), rng) for rng, pos in groups.items()]


def class_of(factor: Factor, positions: Sequence[int]) -> ArgClass | None:
    """The class containing all of ``positions``, or None if they straddle ranges."""
    for cls in classes_of(factor):
        if set(positions) <= set(cls.positions):
            return cls
    return None


def histograms(m: int, v: int) -> Iterator[Histogram]:
    """All compositions of ``m`` into ``v`` non-negative parts, lex-descending."""
    if v == 1:
        yield (m,)
        return
    for first in range(m, -1, -1):
        for rest in histograms(m - first, v - 1):
            yield (first,) + rest


def bucket_count(m: int, v: int) -> int:
    return math.comb(m + v - 1, v - 1)


def is_concentrated(h: Histogram) -> bool:
    """True if every class position holds the same value."""
    return sum(1 for c in h if c) <= 1


def class_histograms(assignments: np.ndarray, positions: Sequence[int], v: int) -> np.ndarray:
    """(rows, v) matrix of value counts over ``positions`` for every row.

    Works column by column; a reduction along the short axis of the full
    assignment matrix is several times slower for wide tables.
    """
    T = len(assignments)
    if v == 2:
        ones = np.zeros(T, dtype=np.int64)
        for p in positions:
            ones += assignments[:, p]
        return np.stack([len(positions) - ones, ones], axis=1)
    hist = np.zeros((T, v), dtype=np.int64)
    idx = np.arange(T)
    for p in positions:
        hist[idx, assignments[:, p]] += 1
    return hist


def bucket_of(cls: ArgClass, a: Assignment) -> Histogram:
    counts = [0] * cls.range.size
    for p in cls.positions:
        counts[a[p]] += 1
    return tuple(counts)


def enumerate_buckets(factor: Factor, cls: ArgClass) -> list[BucketEntry]:
    rows_by_key: dict[Histogram, list[int]] = {}
    for r in range(len(factor.table)):
        rows_by_key.setdefault(bucket_of(cls, index_to_assignment(factor, r)), []).append(r)
    out = []
    for key in histograms(cls.size, cls.range.size):
        rows = rows_by_key.get(key)
        if rows:
            out.append(BucketEntry(key, tuple(rows), tuple(factor.table[r] for r in rows)))
    return out


def identical_groups(entry: BucketEntry, min_size: int = 2) -> list[PotentialGroup]:
    """Maximal groups of equal tokens with at least ``min_size`` members.

    Groups are ordered by their first row.
    """
    members: dict[str, list[int]] = {}
    for row, token in zip(entry.rows, entry.potentials):
        members.setdefault(token, []).append(row)
    return [PotentialGroup(t, tuple(rows)) for t, rows in members.items() if len(rows) >= min_size]


def duplicate_bound(factor: Factor, cls: ArgClass) -> int:
    """Upper bound on the size of any commutative subset inside ``cls``.

    Minimum, over the buckets that can witness a permutation, of the largest
    multiplicity of a single potential.  Buckets whose histogram puts every
    class position on one value are skipped (in the single-class case these
    are exactly the one-potential buckets).  Returns the class size when no
    bucket qualifies.
    """
    bound = cls.size
    for entry in enumerate_buckets(factor, cls):
        if len(entry.potentials) < 2 or is_concentrated(entry.key):
            continue
        bound = min(bound, max(Counter(entry.potentials).values()))
    return bound


class BucketIndex:
    """Bucket and group structure of one argument class, built lazily.

    Construction only assigns every row its bucket and orders rows by
    bucket.  The groups of identical tokens inside a bucket, with their
    sizes and the bitmask of argument positions on which their rows
    disagree (where the element-wise intersection of the group's
    assignments is empty), are computed the first time the bucket is
    asked for and then cached.
    """

    def __init__(self, factor: Factor, cls: ArgClass) -> None:
        self.factor = factor
        self.cls = cls
        A = factor.assignments
        m, v = cls.size, cls.range.size
        hist = class_histograms(A, cls.positions, v)

        # dense rank of each histogram in descending-lex order
        if (m + 1) ** v <= 1 << 22:
            weights = (m + 1) ** np.arange(v - 1, -1, -1, dtype=np.int64)
            packed = hist @ weights
            present = np.zeros((m + 1) ** v, dtype=np.int64)
            present[packed] = 1
            rank = np.cumsum(present[::-1])[::-1] - 1
            bucket = rank[packed]
        else:
            _, bucket = np.unique(-hist, axis=0, return_inverse=True)
            bucket = bucket.reshape(-1)
        n_buckets = int(bucket.max()) + 1
        small = np.int16 if n_buckets < 1 << 15 else np.int64
        order = np.argsort(bucket.astype(small), kind="stable")

        self.row_bounds = np.searchsorted(bucket[order], np.arange(n_buckets + 1))
        self.keys: list[Histogram] = [
            tuple(int(c) for c in hist[order[r]]) for r in self.row_bounds[:-1]
        ]
        self.sizes = np.diff(self.row_bounds)
        self.order = order
        self._binary = all(size & (size - 1) == 0 for size in factor.shape)
        self._groups: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def __len__(self) -> int:
        return len(self.keys)

    def rows_of(self, b: int) -> np.ndarray:
        """Row indices of bucket ``b`` in table order."""
        return self.order[self.row_bounds[b]:self.row_bounds[b + 1]]

    def groups(self, b: int) -> tuple[np.ndarray, np.ndarray]:
        """(sizes, disagreement masks) of every identical-token group in ``b``."""
        hit = self._groups.get(b)
        if hit is not None:
            return hit
        rows = self.rows_of(b)
        codes = self.factor.codes[rows]
        o = np.argsort(codes, kind="stable")
        rows, codes = rows[o], codes[o]
        starts = np.flatnonzero(np.r_[True, codes[1:] != codes[:-1]])
        sizes = np.diff(np.r_[starts, len(rows)])
        masks = np.zeros(len(starts), dtype=np.int64)
        first = np.repeat(rows[starts], sizes)
        f = self.factor
        if self._binary:
            # every argument occupies its own bit field of the row index
            ored = np.bitwise_or.reduceat(rows ^ first, starts)
            for p, (size, stride) in enumerate(zip(f.shape, f.strides)):
                field_bits = (size - 1) * stride
                masks |= ((ored & field_bits) != 0).astype(np.int64) << p
        else:
            for p, (size, stride) in enumerate(zip(f.shape, f.strides)):
                differ = (rows // stride) % size != (first // stride) % size
                masks |= np.logical_or.reduceat(differ, starts).astype(np.int64) << p
        self._groups[b] = (sizes, masks)
        return sizes, masks

    def qualifies(self, b: int) -> bool:
        return int(self.sizes[b]) >= 2 and not is_concentrated(self.keys[b])

    def group_masks_of(self, b: int, min_size: int = 2) -> np.ndarray:
        sizes, masks = self.groups(b)
        return masks[sizes >= min_size]

    def max_multiplicity(self, b: int) -> int:
        return int(self.groups(b)[0].max())

    def entry(self, b: int) -> BucketEntry:
        rows = tuple(int(r) for r in self.rows_of(b))
        return BucketEntry(self.keys[b], rows, tuple(self.factor.table[r] for r in rows))
