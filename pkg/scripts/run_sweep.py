#!/usr/bin/env python3
"""Timing sweep over generated instances, written as CSV or JSON lines.

Example::

    python3 scripts/run_sweep.py --family single --n 4..16 --k 0,2,n/2,n \
        --seeds 5 --timeout-ms 10000 --out sweep.csv
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from comfactor.bench import (
    DEFAULT_ALGORITHMS,
    ReportWriter,
    group_specs,
    run_suite,
    single_specs,
)


@dataclass(frozen=True)
class SweepConfig:
    family: str = "single"
    ns: tuple[int, ...] = tuple(range(4, 17))
    ks: tuple[str, ...] = ("0", "2", "log2n", "n/2", "n-1", "n")
    seeds: int = 5
    algorithms: tuple[str, ...] = DEFAULT_ALGORITHMS
    heuristics: tuple[str, ...] = ("none",)
    timeout_ms: float | None = 10_000.0
    repetitions: int = 1
    workers: int = 1
    fmt: str = "csv"

    def specs(self):
        seeds = range(self.seeds)
        if self.family == "single":
            return list(single_specs(self.ns, self.ks, seeds))
        return list(group_specs(self.ns, seeds))


def _ints(text: str) -> tuple[int, ...]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(t) for t in text.split(","))


def parse_args(argv=None) -> tuple[SweepConfig, str | None]:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--family", choices=("single", "groups"), default="single")
    p.add_argument("--n", default="4..16")
    p.add_argument("--k", default="0,2,log2n,n/2,n-1,n")
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--algo", default=",".join(DEFAULT_ALGORITHMS))
    p.add_argument("--heuristic", default="none")
    p.add_argument("--timeout-ms", type=float, default=10_000.0)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--out")
    a = p.parse_args(argv)
    cfg = SweepConfig(
        family=a.family,
        ns=_ints(a.n),
        ks=tuple(a.k.split(",")),
        seeds=a.seeds,
        algorithms=tuple(a.algo.split(",")),
        heuristics=tuple(a.heuristic.split(",")),
        timeout_ms=a.timeout_ms,
        repetitions=a.reps,
        workers=a.workers,
        fmt=a.format,
    )
    return cfg, a.out


def main(argv=None) -> int:
    cfg, out = parse_args(argv)
    specs = cfg.specs()
    print(f"{len(specs)} instances", file=sys.stderr)
    with ReportWriter(out or sys.stdout, cfg.fmt, comment=repr(cfg)) as sink:
        run_suite(specs, cfg.algorithms, cfg.heuristics, cfg.timeout_ms, cfg.repetitions,
                  sink=sink, workers=cfg.workers)
    return 0


if __name__ == "__main__":
    sys.exit(main())
