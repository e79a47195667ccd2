import itertools

import pytest

from comfactor import (
    BudgetExceeded,
    DeadlineExceeded,
    Factor,
    MixedRanges,
    RandomVariable,
    RangeSpec,
    SubsetTooSmall,
    brute_force,
    find_witness,
    is_commutative,
    is_commutative_pair,
    original_decor,
)
from comfactor.bench import gen_single

from .conftest import BOOL, bool_rvs
from .oracles import oracle_maximum, permutation_commutative


def symmetric_factor(n, v=2):
    rng = RangeSpec(tuple(range(v)))
    rvs = tuple(RandomVariable(f"R{i + 1}", rng) for i in range(n))
    table = tuple(f"h{sorted(a)}" for a in itertools.product(range(v), repeat=n))
    return Factor("sym", rvs, table)


class TestIsCommutative:
    def test_examples(self, phi3, counterexample):
        assert is_commutative(phi3, (0, 1))
        assert not is_commutative(counterexample, (0, 1, 2, 3))
        assert is_commutative(counterexample, (0, 1))
        assert is_commutative(counterexample, (2, 3))

    def test_errors(self, phi3):
        with pytest.raises(SubsetTooSmall):
            is_commutative(phi3, (0,))
        with pytest.raises(IndexError):
            is_commutative(phi3, (0, 5))
        args = (RandomVariable("A", BOOL), RandomVariable("B", RangeSpec((0, 1, 2))))
        with pytest.raises(MixedRanges):
            is_commutative(Factor("f", args, ("1",) * 6), (0, 1))

    def test_matches_permutation_oracle_on_ternary_table(self):
        r3 = RangeSpec((0, 1, 2))
        rvs = tuple(RandomVariable(f"X{i}", r3) for i in range(3))
        table = tuple(str((a[0] + a[1]) % 3 + 3 * a[2] * (a[0] == a[1]) + 1) for a in itertools.product(range(3), repeat=3))
        f = Factor("f", rvs, table)
        for c in [(0, 1), (0, 2), (1, 2), (0, 1, 2)]:
            assert is_commutative(f, c) == permutation_commutative(table, (3, 3, 3), c)

    def test_witness(self, counterexample, phi3):
        assert find_witness(phi3, (0, 1)) is None
        row, canon = find_witness(counterexample, (0, 1, 2, 3))
        assert sorted(row) == sorted(canon)
        table = counterexample.table
        idx = lambda a: int("".join(map(str, a)), 2)
        assert table[idx(row)] != table[idx(canon)]


class TestPair:
    def test_examples(self, phi3):
        assert is_commutative_pair(phi3, 0, 1)
        assert not is_commutative_pair(phi3, 0, 2)

    def test_same_position(self, phi3):
        with pytest.raises(SubsetTooSmall):
            is_commutative_pair(phi3, 1, 1)

    def test_agrees_with_subset_check(self, counterexample):
        for i, j in itertools.combinations(range(4), 2):
            assert is_commutative_pair(counterexample, i, j) == is_commutative(counterexample, (i, j))


class TestBruteForce:
    def test_examples(self, phi3, counterexample):
        assert brute_force(phi3).subsets == ((0, 1),)
        res = brute_force(counterexample)
        assert res.subsets == ((0, 1), (2, 3))
        assert res.checks == 11

    def test_oracle_values(self, phi3, counterexample):
        assert oracle_maximum(phi3.table, (2, 2, 2), [BOOL] * 3) == [(0, 1)]
        assert oracle_maximum(counterexample.table, (2,) * 4, [BOOL] * 4) == [(0, 1), (2, 3)]

    def test_fully_symmetric(self):
        assert brute_force(symmetric_factor(4)).subsets == ((0, 1, 2, 3),)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            brute_force(symmetric_factor(6), budget=10)

    def test_deadline(self):
        f = gen_single(12, 2, 0)
        with pytest.raises(DeadlineExceeded):
            brute_force(f, budget=None, deadline=0.0)

    def test_per_class_search(self):
        r3 = RangeSpec((0, 1, 2))
        args = (RandomVariable("A", BOOL), RandomVariable("T", r3), RandomVariable("B", BOOL), RandomVariable("U", r3))
        shape = (2, 3, 2, 3)
        # swap-invariant in (A,B) and in (T,U)
        table = tuple(
            f"{min(a, b)}{max(a, b)}|{min(t, u)}{max(t, u)}" for a, t, b, u in itertools.product(*(range(s) for s in shape))
        )
        res = brute_force(Factor("f", args, table))
        assert res.subsets == ((0, 2), (1, 3))


class TestOriginalDecor:
    def test_counterexample_is_wrong(self, counterexample):
        found = original_decor(counterexample)
        assert found == (0, 1, 2, 3)
        assert not is_commutative(counterexample, found)
        for true_subset in brute_force(counterexample).subsets:
            assert set(found) > set(true_subset)

    def test_example_is_right(self, phi3):
        assert original_decor(phi3) == (0, 1)

    def test_no_duplicates_gives_empty(self):
        f = Factor("f", bool_rvs("A", "B"), ("1", "2", "3", "4"))
        assert original_decor(f) == ()

    def test_single_range_only(self):
        args = (RandomVariable("A", BOOL), RandomVariable("T", RangeSpec((0, 1, 2))))
        with pytest.raises(MixedRanges):
            original_decor(Factor("f", args, ("1",) * 6))
