from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

from .errors import DeadlineExceeded

Subset = tuple[int, ...]


@dataclass(frozen=True)
class PhaseTiming:
    candidate_ms: float = 0.0
    verification_ms: float = 0.0
    total_ms: float = 0.0
    verified_candidates: int = 0


@dataclass(frozen=True)
class CommutativeResult:
    """Maximum-sized commutative argument subsets found by one detector.

    ``subsets`` holds sorted position tuples in lexicographic order, all of
    one size.  ``checks`` counts evaluations of a commutativity predicate
    (pair scans for the bottom-up detectors, subset checks otherwise).
    ``per_class`` maps each argument class to the maximum subsets found
    inside it, for factors mixing several ranges.
    """

    subsets: tuple[Subset, ...]
    algorithm: str
    timing: PhaseTiming = field(default_factory=PhaseTiming)
    checks: int = 0
    per_class: dict[Subset, tuple[Subset, ...]] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        subs = tuple(sorted({tuple(sorted(s)) for s in self.subsets}))
        if subs and (len({len(s) for s in subs}) != 1 or len(subs[0]) < 2):
            raise ValueError(f"subsets must share one size >= 2, got {subs}")
        object.__setattr__(self, "subsets", subs)

    @property
    def size(self) -> int:
        return len(self.subsets[0]) if self.subsets else 0

    def as_sets(self) -> set[frozenset[int]]:
        return {frozenset(s) for s in self.subsets}


def maximum_subsets(subsets: Iterable[Subset]) -> tuple[Subset, ...]:
    subs = [tuple(sorted(s)) for s in subsets]
    if not subs:
        return ()
    top = max(len(s) for s in subs)
    return tuple(sorted({s for s in subs if len(s) == top}))


def check_deadline(deadline: float | None) -> None:
    if deadline is not None and time.perf_counter() > deadline:
        raise DeadlineExceeded("detector exceeded its time budget")


def elapsed_ms(start: float) -> float:
    return (time.perf_counter() - start) * 1000.0
