import itertools

import pytest

from comfactor import (
    CandidateSet,
    DeadlineExceeded,
    DetectOptions,
    Factor,
    Heuristic,
    PotentialGroup,
    RandomVariable,
    RangeSpec,
    brute_force,
    bucket_loop,
    candidate_for_group,
    classes_of,
    decor_plus,
    enumerate_buckets,
    order_buckets,
    tighter_bound,
    verify_candidates,
)
from comfactor.bench import gen_single

from .conftest import BOOL, bool_rvs


class TestCandidateSet:
    def test_antichain(self):
        cs = CandidateSet()
        assert cs.add(0b0011)
        assert not cs.add(0b0001)
        assert cs.add(0b0111)
        assert cs.subsets() == ((0, 1, 2),)
        assert cs.add(0b1000)
        assert len(cs) == 2

    def test_equality_is_set_based(self):
        assert CandidateSet([0b11, 0b1100]) == CandidateSet([0b1100, 0b11])


class TestCandidateForGroup:
    def test_example_groups(self, phi3, counterexample):
        # rows (high,low,high),(low,high,high) and (high,low,low),(low,high,low)
        assert candidate_for_group(phi3, PotentialGroup("φ3", (2, 4))) == {0, 1}
        assert candidate_for_group(phi3, PotentialGroup("φ4", (3, 5))) == {0, 1}
        rows = tuple(r for r in range(16) if bin(r).count("1") == 1)
        assert candidate_for_group(counterexample, PotentialGroup("φ2", rows)) == {0, 1, 2, 3}

    def test_rejects_singletons(self, phi3):
        with pytest.raises(ValueError):
            candidate_for_group(phi3, PotentialGroup("φ1", (0,)))


class TestBucketLoop:
    def test_example_trace(self, phi3):
        steps = []
        cands = bucket_loop(phi3, classes_of(phi3)[0], trace=steps.append)
        assert cands.subsets() == ((0, 1),)
        after = {s.histogram: s.candidates_after for s in steps}
        assert after[(2, 1)] == ((0, 1),)
        assert [s.skipped for s in steps] == [True, False, False, True]

    def test_counterexample(self, counterexample):
        assert bucket_loop(counterexample, classes_of(counterexample)[0]).subsets() == ((0, 1, 2, 3),)

    def test_distinct_potentials_prune_everything(self):
        f = Factor("f", bool_rvs("A", "B", "C"), tuple(str(i + 1) for i in range(8)))
        assert not bucket_loop(f, classes_of(f)[0])

    def test_deadline(self):
        f = gen_single(10, 4, 0)
        with pytest.raises(DeadlineExceeded):
            bucket_loop(f, classes_of(f)[0], deadline=0.0)


class TestVerify:
    def test_examples(self, phi3, counterexample):
        assert verify_candidates(phi3, CandidateSet([0b011])) == {(0, 1)}
        assert verify_candidates(counterexample, CandidateSet([0b1111])) == {(0, 1), (2, 3)}

    def test_first_only(self, counterexample):
        got = verify_candidates(counterexample, CandidateSet([0b1111]), DetectOptions(return_all=False))
        assert got == {(0, 1)}

    def test_nothing_commutes(self):
        f = Factor("f", bool_rvs("A", "B", "C"), tuple(str(i + 1) for i in range(8)))
        assert verify_candidates(f, CandidateSet([0b111])) == set()

    def test_shared_subsets_checked_once(self, counterexample):
        res = decor_plus(counterexample)
        # 1 four-set, 4 three-sets, 6 pairs
        assert res.timing.verified_candidates == 11


class TestDecorPlus:
    def test_examples(self, phi3, counterexample):
        assert decor_plus(phi3).subsets == ((0, 1),)
        assert decor_plus(counterexample).subsets == ((0, 1), (2, 3))

    def test_planted_block(self):
        f = gen_single(6, 4, 3)
        res = decor_plus(f)
        assert res.subsets == brute_force(f).subsets
        assert res.size == 4

    def test_timing_fields(self, counterexample):
        t = decor_plus(counterexample).timing
        assert t.total_ms >= t.candidate_ms + t.verification_ms - 1e-6

    def test_options_validate(self):
        with pytest.raises(ValueError):
            DetectOptions(min_subset_size=1)
        with pytest.raises(ValueError):
            DetectOptions(heuristic="fastest")
        assert DetectOptions(heuristic="sbf").heuristic is Heuristic.SBF

    def test_empty_class_keeps_other_class(self):
        # (A, B) commute; the ternary pair (T, U) has all-distinct potentials
        r3 = RangeSpec((0, 1, 2))
        args = (RandomVariable("A", BOOL), RandomVariable("B", BOOL), RandomVariable("T", r3), RandomVariable("U", r3))
        table = tuple(f"{a + b}|{t}{u}" for a, b, t, u in itertools.product(range(2), range(2), range(3), range(3)))
        res = decor_plus(Factor("f", args, table))
        assert res.subsets == ((0, 1),)
        assert res.per_class[(2, 3)] == ()

    def test_mixed_ranges_need_concentrated_skip(self):
        # the Boolean class has single-value buckets holding many rows
        r3 = RangeSpec((0, 1, 2))
        args = (RandomVariable("A", BOOL), RandomVariable("B", BOOL), RandomVariable("T", r3))
        table = tuple(f"{a + b}|{t}" for a, b, t in itertools.product(range(2), range(2), range(3)))
        f = Factor("f", args, table)
        assert brute_force(f).subsets == ((0, 1),)
        assert decor_plus(f).subsets == ((0, 1),)


class TestOrdering:
    def test_sbf_example(self, phi3):
        cls = classes_of(phi3)[0]
        ordered = order_buckets(phi3, cls, enumerate_buckets(phi3, cls), "SBF")
        assert [e.key for e in ordered] == [(3, 0), (0, 3), (2, 1), (1, 2)]

    def test_single_bucket_identity(self, phi3):
        cls = classes_of(phi3)[0]
        one = enumerate_buckets(phi3, cls)[1:2]
        for h in Heuristic:
            assert order_buckets(phi3, cls, one, h) == one

    def test_stable_on_ties(self, phi3):
        cls = classes_of(phi3)[0]
        entries = enumerate_buckets(phi3, cls)
        assert order_buckets(phi3, cls, entries, "none") == entries
        # [2,1] and [1,2] tie on every key and keep their order
        for h in ("SBF", "LGF", "SCSF", "SMCF"):
            keys = [e.key for e in order_buckets(phi3, cls, entries, h)]
            assert keys.index((2, 1)) < keys.index((1, 2))

    @pytest.mark.parametrize("h", list(Heuristic))
    def test_heuristics_do_not_change_results(self, h, counterexample):
        assert decor_plus(counterexample, DetectOptions(heuristic=h)).subsets == ((0, 1), (2, 3))


def test_tighter_bound_examples(phi3, counterexample):
    assert tighter_bound(phi3, classes_of(phi3)[0]) == 2
    assert tighter_bound(counterexample, classes_of(counterexample)[0]) == 4
