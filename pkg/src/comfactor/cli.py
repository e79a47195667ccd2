"""Command-line front end.

Exit status: 0 success, 1 domain error (not commutative, unknown factor,
invalid file contents), 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from importlib import resources
from pathlib import Path
from typing import Sequence

from .bench import (
    DEFAULT_ALGORITHMS,
    InstanceSpec,
    ReportWriter,
    group_specs,
    instance_graph,
    run_suite,
    single_specs,
)
from .core import Factor, assignment_index
from .crv import CountedFactor, compress, expand
from .decorplus import DetectOptions, Heuristic
from .detect import ALGORITHMS, run_detector
from .errors import ComfactorError
from .fileio import Document, dumps, load
from .reference import DEFAULT_SUBSET_BUDGET, find_witness

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
FIXTURES = ("phi3.json", "counterexample.json")
BUDGET_ENV = "COMFACTOR_SUBSET_BUDGET"


class UsageError(Exception):
    pass


def _budget() -> int | None:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_SUBSET_BUDGET
    if raw.strip().lower() in ("none", "inf", "unlimited"):
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{BUDGET_ENV} must be an integer or 'none', got {raw!r}") from None


def _pick_factor(doc: Document, name: str | None):
    if name is not None:
        try:
            return doc.factor(name)
        except KeyError as e:
            raise ComfactorError(str(e.args[0])) from None
    if len(doc.factors) != 1:
        raise UsageError(
            f"file has {len(doc.factors)} factors; choose one with --factor "
            f"({', '.join(f.name for f in doc.factors)})"
        )
    return doc.factors[0]


def _ground(f) -> Factor:
    return expand(f) if isinstance(f, CountedFactor) else f


def _positions(factor: Factor, names: str) -> list[int]:
    out = []
    for name in (n.strip() for n in names.split(",") if n.strip()):
        try:
            out.append(factor.position(name))
        except KeyError:
            raise ComfactorError(f"factor {factor.name} has no argument {name!r}") from None
    return out


def _fmt_subset(factor: Factor, subset) -> str:
    return "{" + ", ".join(factor.arg_names(subset)) + "}"


def _emit_document(doc: Document, out: str | None) -> None:
    text = dumps(doc)
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_detect(args) -> int:
    doc = load(args.file)
    factor = _ground(_pick_factor(doc, args.factor))
    options = DetectOptions(heuristic=Heuristic.parse(args.heuristic), return_all=not args.first)
    deadline = None if args.timeout_ms is None else time.perf_counter() + args.timeout_ms / 1000
    subsets, timing, checks = run_detector(
        factor, args.algo, options, deadline=deadline, subset_budget=_budget()
    )
    unverified = args.algo == "original-decor"
    if unverified:
        print(
            "WARNING: UNVERIFIED result. original-decor skips verification and may "
            "report argument sets that are not commutative.",
            file=sys.stderr,
        )
    report = {
        "factor": factor.name,
        "algorithm": args.algo,
        "heuristic": options.heuristic.value,
        "verified": not unverified,
        "size": len(subsets[0]) if subsets else 0,
        "subsets": [factor.arg_names(s) for s in subsets],
        "checks": checks,
        "timing": {
            "candidate_ms": timing.candidate_ms,
            "verification_ms": timing.verification_ms,
            "total_ms": timing.total_ms,
            "verified_candidates": timing.verified_candidates,
        },
    }
    if args.json:
        print(json.dumps(report, ensure_ascii=False, sort_keys=True))
        return EXIT_OK
    tag = " (UNVERIFIED)" if unverified else ""
    if subsets:
        print(" ".join(_fmt_subset(factor, s) for s in subsets) + tag)
    else:
        print("no commutative subset" + tag)
    print(f"size: {report['size']}")
    print(
        f"candidates: {timing.candidate_ms:.3f} ms  verification: {timing.verification_ms:.3f} ms  "
        f"total: {timing.total_ms:.3f} ms  checks: {checks}"
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    doc = load(args.file)
    factor = _ground(_pick_factor(doc, args.factor))
    pos = _positions(factor, args.subset)
    witness = find_witness(factor, pos)
    names = _fmt_subset(factor, sorted(set(pos)))
    ok = witness is None
    if args.json:
        out = {"factor": factor.name, "subset": factor.arg_names(sorted(set(pos))), "commutative": ok}
        if not ok:
            row, perm = witness
            out["witness"] = [
                {"assignment": list(factor.labels(row)), "potential": factor.table[assignment_index(factor, row)]},
                {"assignment": list(factor.labels(perm)), "potential": factor.table[assignment_index(factor, perm)]},
            ]
        print(json.dumps(out, ensure_ascii=False, sort_keys=True))
    elif ok:
        print(f"{names} is commutative in {factor.name}")
    else:
        row, perm = witness
        print(f"{names} is NOT commutative in {factor.name}")
        for a in (row, perm):
            labels = ", ".join(str(x) for x in factor.labels(a))
            print(f"  {factor.name}({labels}) = {factor.table[assignment_index(factor, a)]}")
    return EXIT_OK if ok else EXIT_DOMAIN


def cmd_compress(args) -> int:
    doc = load(args.file)
    factor = _pick_factor(doc, args.factor)
    if isinstance(factor, CountedFactor):
        raise ComfactorError(f"factor {factor.name} is already counted")
    cf = compress(factor, _positions(factor, args.subset))
    _emit_document(doc.replace(cf), args.out)
    return EXIT_OK


def cmd_expand(args) -> int:
    doc = load(args.file)
    targets = [_pick_factor(doc, args.factor)] if args.factor else [
        f for f in doc.factors if isinstance(f, CountedFactor)
    ]
    for f in targets:
        if isinstance(f, CountedFactor):
            doc = doc.replace(expand(f))
    _emit_document(doc, args.out)
    return EXIT_OK


def _spec_from_args(args) -> InstanceSpec:
    if args.groups:
        return InstanceSpec(
            args.n, "groups", groups=args.groups, group_size=args.group_size or args.n // args.groups,
            seed=args.seed, range_size=args.range_size,
        )
    return InstanceSpec(args.n, "single", k=args.k, seed=args.seed, range_size=args.range_size)


def cmd_gen(args) -> int:
    try:
        spec = _spec_from_args(args)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _emit_document(Document.from_graph(instance_graph(spec.build())), args.out)
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def cmd_bench(args) -> int:
    try:
        ns = _int_list(args.n)
        seeds = list(range(args.seed, args.seed + args.instances))
        if args.family == "single":
            specs = list(single_specs(ns, [k.strip() for k in args.k.split(",")], seeds))
        else:
            specs = list(group_specs(ns, seeds))
        algos = [a.strip() for a in args.algo.split(",")] if args.algo else list(DEFAULT_ALGORITHMS)
        for a in algos:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")
        heuristics = [Heuristic.parse(h).value for h in args.heuristic.split(",")]
    except ValueError as e:
        raise UsageError(str(e)) from None
    comment = f"comfactor bench family={args.family} n={args.n} seed={args.seed} instances={args.instances}"
    target = args.out if args.out not in (None, "-") else sys.stdout
    with ReportWriter(target, args.format, comment) as sink:
        run_suite(specs, algos, heuristics, args.timeout_ms, args.reps, sink=sink, workers=args.workers)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    data = resources.files("comfactor") / "data"
    for name in FIXTURES:
        (out / name).write_text((data / name).read_text(encoding="utf-8"), encoding="utf-8")
        print(out / name)
    return EXIT_OK


def fixture_path(name: str) -> Path:
    """Filesystem path of a bundled fixture (package installed from source)."""
    return Path(str(resources.files("comfactor") / "data" / name))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="comfactor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("detect", help="find maximum commutative argument subsets")
    d.add_argument("file")
    d.add_argument("--factor")
    d.add_argument("--algo", choices=ALGORITHMS, default="decor+")
    d.add_argument("--heuristic", default="none", choices=[h.value for h in Heuristic])
    g = d.add_mutually_exclusive_group()
    g.add_argument("--all", action="store_true", default=True, help="report every maximum subset (default)")
    g.add_argument("--first", action="store_true", help="stop at the first maximum subset")
    d.add_argument("--timeout-ms", type=float)
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_detect)

    v = sub.add_parser("verify", help="check one argument subset for commutativity")
    v.add_argument("file")
    v.add_argument("--factor")
    v.add_argument("--subset", required=True, help="comma-separated argument names")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("compress", help="replace a commutative block by a counting argument")
    c.add_argument("file")
    c.add_argument("--factor")
    c.add_argument("--subset", required=True)
    c.add_argument("-o", "--out")
    c.set_defaults(func=cmd_compress)

    e = sub.add_parser("expand", help="turn counted factors back into ground tables")
    e.add_argument("file")
    e.add_argument("--factor")
    e.add_argument("-o", "--out")
    e.set_defaults(func=cmd_expand)

    gen = sub.add_parser("gen", help="generate a factor with planted commutative blocks")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, default=0)
    gen.add_argument("--groups", type=int, default=0)
    gen.add_argument("--group-size", type=int, default=0)
    gen.add_argument("--range-size", type=int, default=2)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--out")
    gen.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="time detectors on generated instances")
    b.add_argument("--family", choices=("single", "groups"), default="single")
    b.add_argument("--n", default="2..8", help="list or range, e.g. 2..8 or 4,8,16")
    b.add_argument("--k", default="n/2", help="comma list of integers or 0, 2, log2n, n/2, n-1, n")
    b.add_argument("--algo", help=f"comma list from {','.join(ALGORITHMS)}")
    b.add_argument("--heuristic", default="none", help="comma list of heuristics for decor+")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--instances", type=int, default=1, help="seeds per configuration")
    b.add_argument("--timeout-ms", type=float)
    b.add_argument("--reps", type=int, default=1)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)

    f = sub.add_parser("fixtures", help="copy the bundled example files")
    f.add_argument("--out", default=".")
    f.set_defaults(func=cmd_fixtures)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as e:
        print(f"comfactor: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"comfactor: {e}", file=sys.stderr)
        return EXIT_IO
    except ComfactorError as e:
        print(f"comfactor: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
