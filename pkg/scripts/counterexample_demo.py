#!/usr/bin/env python3
"""Show the unverified bucket intersection accepting a non-commutative set.

On the bundled four-argument factor, intersecting identical-potential
positions across buckets yields all four arguments, yet swapping values
between the two pairs changes the potential.  The verified detectors return
the two pairs instead.
"""

from __future__ import annotations

from comfactor import (
    a_decor,
    assignment_index,
    brute_force,
    cc_decor,
    decor_plus,
    find_witness,
    is_commutative,
    original_decor,
)
from comfactor.cli import fixture_path
from comfactor.fileio import load


def main() -> int:
    f = load(fixture_path("counterexample.json")).factor("phi")
    merged = original_decor(f)
    print(f"unverified intersection: {f.arg_names(merged)}")
    print(f"commutative: {is_commutative(f, merged)}")
    row, perm = find_witness(f, merged)
    for a in (row, perm):
        print(f"  {f.name}{f.labels(a)} = {f.table[assignment_index(f, a)]}")
    for detector in (decor_plus, a_decor, cc_decor, brute_force):
        res = detector(f)
        print(f"{res.algorithm:>9}: {[f.arg_names(s) for s in res.subsets]}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
