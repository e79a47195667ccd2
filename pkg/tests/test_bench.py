import csv
import io
import json

import pytest

from comfactor import brute_force, decor_plus
from comfactor.bench import (
    CSV_COLUMNS,
    InstanceSpec,
    ReportWriter,
    gen_groups,
    gen_single,
    group_specs,
    resolve_k,
    run_one,
    run_suite,
    single_specs,
)


class TestSpec:
    def test_k_one_normalised(self):
        assert InstanceSpec(4, k=1).k == 0

    @pytest.mark.parametrize(
        "kwargs",
        [dict(n=3, k=4), dict(n=4, family="groups", groups=1, group_size=2),
         dict(n=4, family="groups", groups=2, group_size=3), dict(n=4, family="ring")],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            InstanceSpec(**kwargs)

    def test_symbolic_k(self):
        assert [resolve_k(t, 16) for t in ("0", "2", "log2n", "n/2", "n-1", "n")] == [0, 2, 4, 8, 15, 16]


class TestGenerators:
    def test_no_symmetry_without_block(self):
        f = gen_single(4, 0, 5)
        assert len(set(f.table)) == 16
        assert brute_force(f).subsets == ()

    def test_planted_block_found(self):
        spec = InstanceSpec(6, k=4, seed=11)
        assert brute_force(spec.build()).subsets == spec.planted()

    def test_full_block(self):
        assert brute_force(gen_single(3, 3, 0)).subsets == ((0, 1, 2),)

    @pytest.mark.parametrize("n,g,s", [(4, 2, 2), (6, 2, 3), (6, 3, 2)])
    def test_groups(self, n, g, s):
        spec = InstanceSpec(n, "groups", groups=g, group_size=s, seed=3)
        got = brute_force(spec.build()).subsets
        assert got == spec.planted()
        assert len(got) == g and all(len(c) == s for c in got)

    def test_deterministic(self):
        assert gen_single(8, 3, 42) == gen_single(8, 3, 42)
        assert gen_single(8, 3, 42).table != gen_single(8, 3, 43).table
        assert gen_groups(8, 2, 3, 1) == gen_groups(8, 2, 3, 1)

    def test_ternary_range(self):
        spec = InstanceSpec(4, k=3, seed=2, range_size=3)
        assert brute_force(spec.build()).subsets == spec.planted()

    def test_tokens_are_numeric(self):
        assert all(t.isdigit() for t in gen_single(5, 2, 0).table)


class TestRunner:
    def test_small_suite(self):
        specs = list(single_specs([2, 4], ["n/2"], [0]))
        records = run_suite(specs)
        assert len(records) == 2 * 4
        assert not any(r.timed_out for r in records)

    def test_repetitions_and_heuristics(self):
        specs = [InstanceSpec(4, k=2)]
        records = run_suite(specs, ["decor+", "brute"], ["none", "SBF"], repetitions=2)
        assert len(records) == (2 + 1) * 2
        assert {r.heuristic for r in records if r.algorithm == "decor+"} == {"none", "SBF"}

    def test_timeout_recorded(self):
        spec = InstanceSpec(13, k=2, seed=0)
        rec = run_one(spec.build(), spec, "brute", timeout_ms=50)
        assert rec.timed_out and rec.subsets == () and rec.timing.total_ms >= 50

    def test_single_candidate_on_large_instance(self):
        res = decor_plus(gen_single(16, 8, 0))
        assert res.size == 8 and res.timing.verified_candidates == 1

    def test_workers_match_serial(self):
        specs = list(single_specs([4, 5], ["2", "n"], [0, 1]))
        serial = [(r.spec, r.algorithm, r.subsets) for r in run_suite(specs, ["decor+", "cc-decor"])]
        pooled = [(r.spec, r.algorithm, r.subsets) for r in run_suite(specs, ["decor+", "cc-decor"], workers=2)]
        assert serial == pooled

    def test_group_specs_use_divisors(self):
        got = {(s.n, s.groups, s.group_size) for s in group_specs([4, 6, 8], [0])}
        assert got == {(4, 2, 2), (6, 2, 3), (6, 3, 2), (8, 2, 4), (8, 4, 2)}


class TestReports:
    def test_csv(self):
        buf = io.StringIO()
        with ReportWriter(buf, "csv", "seed=0") as sink:
            run_suite([InstanceSpec(3, k=2)], ["decor+"], sink=sink)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "# seed=0"
        rows = list(csv.DictReader(lines[1:]))
        assert tuple(rows[0]) == CSV_COLUMNS
        assert rows[0]["result_size"] == "2" and rows[0]["timed_out"] == "0"

    def test_jsonl(self, tmp_path):
        path = tmp_path / "r.jsonl"
        with ReportWriter(path, "jsonl") as sink:
            run_suite([InstanceSpec(4, "groups", groups=2, group_size=2, seed=1)], ["cc-decor"], sink=sink)
        rec = json.loads(path.read_text().splitlines()[0])
        assert rec["k_or_gs"] == "2x2" and len(rec["subsets"]) == 2
