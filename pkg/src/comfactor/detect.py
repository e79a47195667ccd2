"""Uniform entry point over all detectors, keyed by the names used on the CLI."""

from __future__ import annotations

import time

from .bottomup import a_decor, cc_decor
from .core import Factor
from .decorplus import DetectOptions, decor_plus
from .reference import DEFAULT_SUBSET_BUDGET, brute_force, original_decor
from .result import CommutativeResult, PhaseTiming, elapsed_ms

ALGORITHMS = ("decor+", "a-decor", "cc-decor", "brute", "original-decor")
# the first four are guaranteed to return every maximum commutative subset
CORRECT_ALGORITHMS = ("decor+", "a-decor", "cc-decor", "brute")


def run_detector(
    factor: Factor,
    algorithm: str,
    options: DetectOptions = DetectOptions(),
    *,
    deadline: float | None = None,
    subset_budget: int | None = DEFAULT_SUBSET_BUDGET,
) -> tuple[tuple[tuple[int, ...], ...], PhaseTiming, int]:
    """Run one detector; returns (subsets, timing, checks).

    ``original-decor`` yields its single unverified set, which may have fewer
    than two members, so it does not go through CommutativeResult.
    """
    if algorithm == "original-decor":
        start = time.perf_counter()
        found = original_decor(factor, deadline=deadline)
        total = elapsed_ms(start)
        return ((found,) if found else ()), PhaseTiming(total, 0.0, total, 0), 0
    res = detect(factor, algorithm, options, deadline=deadline, subset_budget=subset_budget)
    return res.subsets, res.timing, res.checks


def detect(
    factor: Factor,
    algorithm: str = "decor+",
    options: DetectOptions = DetectOptions(),
    *,
    deadline: float | None = None,
    subset_budget: int | None = DEFAULT_SUBSET_BUDGET,
) -> CommutativeResult:
    if algorithm == "decor+":
        return decor_plus(factor, options, deadline=deadline)
    if algorithm == "a-decor":
        return a_decor(factor, deadline=deadline)
    if algorithm == "cc-decor":
        return cc_decor(factor, deadline=deadline)
    if algorithm == "brute":
        return brute_force(factor, budget=subset_budget, deadline=deadline)
    raise ValueError(f"unknown algorithm {algorithm!r}; choose from {CORRECT_ALGORITHMS}")
