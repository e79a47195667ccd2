"""Seeded instance generators and a timed runner for all detectors.

Generated potentials are integer tokens, one per equivalence class of rows
that the planted symmetry forces to agree.  Distinct classes never share a
token, so the planted blocks are the only symmetry present.  Class ids are
shuffled with the instance seed so tokens do not simply increase with row
order.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence, TextIO

import numpy as np

from .buckets import class_histograms
from .core import Factor, FactorGraph, RandomVariable, RangeSpec
from .decorplus import DetectOptions, Heuristic
from .detect import run_detector
from .errors import BudgetExceeded, DeadlineExceeded
from .result import PhaseTiming

DEFAULT_ALGORITHMS = ("original-decor", "decor+", "a-decor", "brute")
CSV_COLUMNS = (
    "n", "k_or_gs", "family", "seed", "algorithm", "heuristic", "result_size",
    "candidate_ms", "verification_ms", "total_ms", "timed_out",
)
TIMING_COLUMNS = ("candidate_ms", "verification_ms", "total_ms")


@dataclass(frozen=True)
class InstanceSpec:
    """One generated factor: ``single`` plants one block of ``k`` arguments,
    ``groups`` plants ``groups`` disjoint blocks of ``group_size``."""

    n: int
    family: str = "single"
    k: int = 0
    groups: int = 0
    group_size: int = 0
    seed: int = 0
    range_size: int = 2

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.range_size < 2:
            raise ValueError("range_size must be at least 2")
        if self.family == "single":
            if not 0 <= self.k <= self.n:
                raise ValueError(f"k={self.k} outside 0..{self.n}")
            if self.k == 1:
                object.__setattr__(self, "k", 0)
        elif self.family == "groups":
            if self.groups < 2 or self.group_size < 2 or self.groups * self.group_size > self.n:
                raise ValueError(
                    f"groups need g >= 2, s >= 2 and g*s <= n, got g={self.groups} s={self.group_size}"
                )
        else:
            raise ValueError(f"unknown family {self.family!r}")

    @property
    def k_or_gs(self) -> str:
        return str(self.k) if self.family == "single" else f"{self.groups}x{self.group_size}"

    def build(self) -> Factor:
        if self.family == "single":
            return gen_single(self.n, self.k, self.seed, self.range_size)
        return gen_groups(self.n, self.groups, self.group_size, self.seed, self.range_size)

    def planted(self) -> tuple[tuple[int, ...], ...]:
        """The blocks the generator plants, sorted."""
        return _draw(self)[0]


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _draw(spec: InstanceSpec) -> tuple[tuple[tuple[int, ...], ...], np.random.Generator]:
    """Planted blocks plus the generator state left for relabelling tokens."""
    rng = _rng(spec.seed)
    order = rng.permutation(spec.n)
    if spec.family == "single":
        blocks = (tuple(sorted(int(p) for p in order[: spec.k])),) if spec.k >= 2 else ()
    else:
        s = spec.group_size
        blocks = tuple(
            sorted(tuple(sorted(int(p) for p in order[i * s:(i + 1) * s])) for i in range(spec.groups))
        )
    return blocks, rng


def instance_range(range_size: int) -> RangeSpec:
    return RangeSpec(tuple(range(range_size)), f"r{range_size}")


def instance_rvs(n: int, range_size: int = 2) -> tuple[RandomVariable, ...]:
    rng = instance_range(range_size)
    return tuple(RandomVariable(f"R{i + 1}", rng) for i in range(n))


def _planted_factor(n: int, blocks: Sequence[Sequence[int]], v: int, rng: np.random.Generator) -> Factor:
    A = np.indices((v,) * n).reshape(n, -1).T
    key = np.zeros(len(A), dtype=np.int64)
    blocked = set()
    for block in blocks:
        counts = class_histograms(A, block, v)
        _, hist_id = np.unique(counts, axis=0, return_inverse=True)
        key = key * math.comb(len(block) + v - 1, v - 1) + hist_id.reshape(-1)
        blocked.update(block)
    for i in range(n):
        if i not in blocked:
            key = key * v + A[:, i]
    _, cls = np.unique(key, return_inverse=True)
    cls = cls.reshape(-1)
    relabel = rng.permutation(int(cls.max()) + 1)
    tokens = tuple(str(int(t) + 1) for t in relabel[cls])
    return Factor("phi", instance_rvs(n, v), tokens)


def gen_single(n: int, k: int, seed: int, range_size: int = 2) -> Factor:
    """Factor over ``n`` arguments whose only maximum commutative subset is a planted ``k``-block."""
    blocks, rng = _draw(InstanceSpec(n, "single", k=k, seed=seed, range_size=range_size))
    return _planted_factor(n, blocks, range_size, rng)


def gen_groups(n: int, g: int, s: int, seed: int, range_size: int = 2) -> Factor:
    """Factor with ``g`` disjoint planted blocks of size ``s``."""
    blocks, rng = _draw(InstanceSpec(n, "groups", groups=g, group_size=s, seed=seed, range_size=range_size))
    return _planted_factor(n, blocks, range_size, rng)


def instance_graph(factor: Factor) -> FactorGraph:
    return FactorGraph(factor.args, (factor,))


def resolve_k(token: str | int, n: int) -> int:
    """Number of planted arguments from an integer or one of 0, 2, log2n, n/2, n-1, n."""
    if isinstance(token, int):
        return token
    t = token.strip().lower()
    named = {
        "log2n": int(math.floor(math.log2(n))) if n >= 1 else 0,
        "n/2": n // 2,
        "n-1": n - 1,
        "n": n,
    }
    if t in named:
        return named[t]
    return int(t)


@dataclass(frozen=True)
class RunRecord:
    spec: InstanceSpec
    algorithm: str
    heuristic: str
    result_size: int
    subsets: tuple[tuple[int, ...], ...]
    timing: PhaseTiming = field(default_factory=PhaseTiming)
    timed_out: bool = False

    def row(self) -> dict:
        return {
            "n": self.spec.n,
            "k_or_gs": self.spec.k_or_gs,
            "family": self.spec.family,
            "seed": self.spec.seed,
            "algorithm": self.algorithm,
            "heuristic": self.heuristic,
            "result_size": self.result_size,
            "candidate_ms": round(self.timing.candidate_ms, 3),
            "verification_ms": round(self.timing.verification_ms, 3),
            "total_ms": round(self.timing.total_ms, 3),
            "timed_out": int(self.timed_out),
        }

    def json_obj(self) -> dict:
        out = self.row()
        out["subsets"] = [list(s) for s in self.subsets]
        out["verified_candidates"] = self.timing.verified_candidates
        out["spec"] = asdict(self.spec)
        return out


def run_one(
    factor: Factor,
    spec: InstanceSpec,
    algorithm: str,
    heuristic: str = "none",
    timeout_ms: float | None = None,
) -> RunRecord:
    """Time one detector on one factor; a crossed deadline yields a timed-out record."""
    options = DetectOptions(heuristic=Heuristic.parse(heuristic))
    label = options.heuristic.value if algorithm == "decor+" else "-"
    start = time.perf_counter()
    deadline = None if timeout_ms is None else start + timeout_ms / 1000.0
    try:
        subsets, timing, _ = run_detector(factor, algorithm, options, deadline=deadline, subset_budget=None)
    except (DeadlineExceeded, BudgetExceeded):
        total = (time.perf_counter() - start) * 1000.0
        return RunRecord(spec, algorithm, label, 0, (), PhaseTiming(0.0, 0.0, total, 0), True)
    size = len(subsets[0]) if subsets else 0
    return RunRecord(spec, algorithm, label, size, subsets, timing, False)


def _run_spec(args) -> list[RunRecord]:
    spec, algorithms, heuristics, timeout_ms, repetitions = args
    factor = spec.build()
    out = []
    for algorithm in algorithms:
        for h in heuristics if algorithm == "decor+" else ("none",):
            for _ in range(repetitions):
                out.append(run_one(factor, spec, algorithm, h, timeout_ms))
    return out


def run_suite(
    specs: Iterable[InstanceSpec],
    algorithms: Sequence[str] = DEFAULT_ALGORITHMS,
    heuristics: Sequence[str] = ("none",),
    timeout_ms: float | None = None,
    repetitions: int = 1,
    *,
    sink: Callable[[RunRecord], None] | None = None,
    workers: int = 1,
) -> list[RunRecord]:
    """Run every (spec, algorithm[, heuristic]) ``repetitions`` times.

    Heuristics only apply to ``decor+``.  With ``workers > 1`` instances are
    spread over processes; each detector call itself stays single-threaded.
    Records reach ``sink`` in spec order as soon as their spec finishes.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    jobs = [(s, tuple(algorithms), tuple(heuristics), timeout_ms, repetitions) for s in specs]
    records: list[RunRecord] = []

    def emit(batch: list[RunRecord]) -> None:
        for r in batch:
            records.append(r)
            if sink is not None:
                sink(r)

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for batch in pool.map(_run_spec, jobs):
                emit(batch)
    else:
        for job in jobs:
            emit(_run_spec(job))
    return records


class ReportWriter:
    """Streams records to CSV (with a ``# ...`` header line) or JSON lines."""

    def __init__(self, target: str | Path | TextIO, fmt: str = "csv", comment: str | None = None) -> None:
        if fmt not in ("csv", "jsonl"):
            raise ValueError("fmt must be csv or jsonl")
        self.fmt = fmt
        self._owned = isinstance(target, (str, Path))
        self._fh = open(target, "w", encoding="utf-8", newline="") if self._owned else target
        if fmt == "csv":
            if comment:
                self._fh.write(f"# {comment}\n")
            self._csv = csv.DictWriter(self._fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
            self._csv.writeheader()

    def __call__(self, record: RunRecord) -> None:
        if self.fmt == "csv":
            self._csv.writerow(record.row())
        else:
            self._fh.write(json.dumps(record.json_obj(), sort_keys=True) + "\n")
        self._fh.flush()

    def close(self) -> None:
        if self._owned:
            self._fh.close()

    def __enter__(self) -> "ReportWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def single_specs(ns: Iterable[int], ks: Iterable[str | int], seeds: Iterable[int]) -> Iterator[InstanceSpec]:
    seeds = list(seeds)
    ks = list(ks)
    for n in ns:
        for k in ks:
            kk = resolve_k(k, n)
            if not 0 <= kk <= n:
                continue
            for seed in seeds:
                yield InstanceSpec(n, "single", k=kk, seed=seed)


def group_specs(ns: Iterable[int], seeds: Iterable[int]) -> Iterator[InstanceSpec]:
    """For each n, every divisor g with 2 <= g <= n/2 and s = n // g."""
    seeds = list(seeds)
    for n in ns:
        for g in range(2, n // 2 + 1):
            if n % g:
                continue
            for seed in seeds:
                yield InstanceSpec(n, "groups", groups=g, group_size=n // g, seed=seed)
