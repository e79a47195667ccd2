"""Counted form of a factor with a commutative argument block.

Because a commutative block only matters through how many of its arguments
take each value, its positions can be replaced by one histogram-valued
argument.  The counted table lists, for every histogram (in the order of
``buckets.histograms``) and every assignment of the remaining arguments in
row order, one potential.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .buckets import Histogram, bucket_count, class_histograms, histograms
from .core import Assignment, Factor, RandomVariable, RangeSpec
from .errors import InvalidFactor, NotCommutative, SubsetTooSmall, WellDefinednessViolation
from .reference import find_witness


def histogram_multiplicity(h: Sequence[int]) -> int:
    """Number of block assignments realising ``h``: m! / prod(n_i!)."""
    out = math.factorial(sum(h))
    for c in h:
        out //= math.factorial(c)
    return out


@dataclass(frozen=True)
class CountedFactor:
    """``args`` keeps the ground argument order; ``positions`` marks the counted block."""

    name: str
    args: tuple[RandomVariable, ...]
    positions: tuple[int, ...]
    table: tuple[str, ...] = field(repr=False)

    def __post_init__(self) -> None:
        args, pos = tuple(self.args), tuple(sorted(self.positions))
        object.__setattr__(self, "args", args)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "table", tuple(self.table))
        if len(pos) < 2:
            raise SubsetTooSmall("a counted block needs at least 2 arguments")
        if len(set(pos)) != len(self.positions) or not all(0 <= p < len(args) for p in pos):
            raise InvalidFactor(f"bad counted positions {self.positions}")
        if len({args[p].range for p in pos}) != 1:
            raise InvalidFactor("counted arguments must share one range")
        expected = bucket_count(self.block_size, self.range.size) * math.prod(
            a.range.size for a in self.other_args
        )
        if len(self.table) != expected:
            raise InvalidFactor(f"counted table has {len(self.table)} entries, expected {expected}")

    @property
    def range(self) -> RangeSpec:
        return self.args[self.positions[0]].range

    @property
    def block_size(self) -> int:
        return len(self.positions)

    @property
    def counted_args(self) -> tuple[RandomVariable, ...]:
        return tuple(self.args[p] for p in self.positions)

    @property
    def other_positions(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.args)) if i not in self.positions)

    @property
    def other_args(self) -> tuple[RandomVariable, ...]:
        return tuple(self.args[i] for i in self.other_positions)

    @property
    def histograms(self) -> tuple[Histogram, ...]:
        return tuple(histograms(self.block_size, self.range.size))

    def entries(self) -> Iterator[tuple[Histogram, Assignment, str]]:
        """(histogram, other-argument assignment, potential) in table order."""
        others = [range(a.range.size) for a in self.other_args]
        it = iter(self.table)
        for h in self.histograms:
            for o in itertools.product(*others):
                yield h, o, next(it)


def _row_keys(factor: Factor, positions: Sequence[int]) -> tuple[np.ndarray, int]:
    """Counted-table index of every ground row, and the counted table length."""
    pos = list(positions)
    others = [i for i in range(factor.arity) if i not in pos]
    v = factor.args[pos[0]].range.size
    A = factor.assignments
    hists = list(histograms(len(pos), v))
    hist_id = {h: i for i, h in enumerate(hists)}
    counts = class_histograms(A, pos, v)
    seen, inverse = np.unique(counts, axis=0, return_inverse=True)
    lookup = np.array([hist_id[tuple(int(c) for c in row)] for row in seen], dtype=np.int64)
    hid = lookup[inverse.reshape(-1)]

    other_shape = [factor.shape[i] for i in others]
    n_other = math.prod(other_shape)
    oid = np.zeros(len(A), dtype=np.int64)
    for i, size in zip(others, other_shape):
        oid = oid * size + A[:, i]
    return hid * n_other + oid, len(hists) * n_other


def compress(factor: Factor, subset: Sequence[int]) -> CountedFactor:
    """Replace a commutative block by its histogram.

    Raises NotCommutative with a witness when the block does not commute.
    """
    witness = find_witness(factor, subset)
    pos = sorted(set(subset))
    if witness is not None:
        row, perm = witness
        raise NotCommutative(
            f"{factor.arg_names(pos)} not commutative in {factor.name}: "
            f"{factor.labels(row)} vs {factor.labels(perm)}"
        )
    keys, size = _row_keys(factor, pos)
    rep = np.full(size, -1, dtype=np.int64)
    rep[keys] = np.arange(len(keys))
    rep_codes = factor.codes[rep]
    if np.any(rep == -1) or not np.array_equal(rep_codes[keys], factor.codes):
        raise WellDefinednessViolation(
            f"rows of {factor.name} realising one histogram disagree on their potential"
        )
    table = tuple(factor.table[int(r)] for r in rep)
    return CountedFactor(factor.name, factor.args, tuple(pos), table)


def expand(cf: CountedFactor) -> Factor:
    """Ground factor over the original argument order."""
    probe = Factor(cf.name, cf.args, ("1",) * math.prod(a.range.size for a in cf.args))
    keys, _ = _row_keys(probe, cf.positions)
    return Factor(cf.name, cf.args, tuple(cf.table[int(k)] for k in keys))
