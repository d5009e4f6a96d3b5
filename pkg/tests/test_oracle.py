"""The brute-force enumerators themselves: cardinalities, determinism, budgets."""

import math

import pytest

from embtrees import (
    BudgetExceeded,
    EnumerationBudget,
    Profile,
    StepSet,
    census_by_type,
    count_function_family,
    enumerate_embedded_cayley,
    enumerate_marked_strees,
    enumerate_sary,
    enumerate_sfunctions,
)
from embtrees.core import (
    embedded_cayley_to_json,
    marked_stree_to_json,
    sary_to_json,
    sfunction_to_json,
)
from embtrees.oracle import dump_ndjson, rooted_cayley_trees

from conftest import ALL_STEP_SETS, profiles_up_to

PM = StepSet([-1, 1])


class TestCardinalities:
    def test_forced_function(self):
        funcs = list(enumerate_sfunctions(PM, Profile.parse("2,1"), "nonneg"))
        assert len(funcs) == 1

    def test_single_vertex(self):
        funcs = list(enumerate_sfunctions(StepSet([0, 1]), Profile.parse("1"),
                                          "nonneg"))
        assert len(funcs) == 1 and funcs[0].image == {}

    def test_function_count_matches_lemma(self):
        for S in (PM, StepSet([-1, 0, 1])):
            for p in profiles_up_to(5):
                regime = "nonneg" if p.ell == 0 else "general"
                got = sum(1 for _ in enumerate_sfunctions(S, p, regime))
                assert got == count_function_family("profile", regime, S,
                                                    profile=p)

    def test_trees_equinumerous_with_functions(self):
        for S in ALL_STEP_SETS:
            for p in profiles_up_to(4, nonneg=(S.m != -1) or None):
                regime = "nonneg" if p.ell == 0 else "general"
                nf = sum(1 for _ in enumerate_sfunctions(S, p, regime))
                nt = sum(1 for _ in enumerate_marked_strees(S, p, regime))
                assert nf == nt, (S, str(p))

    def test_marked_tree_pin(self):
        trees = list(enumerate_marked_strees(PM, Profile.parse("1,1"), "nonneg"))
        assert len(trees) == 1
        t = trees[0]
        assert t.mark == (1, 1) and t.parent[(1, 1)] == (0, 1)

    def test_embedded_cardinality_pins(self):
        assert sum(1 for _ in enumerate_embedded_cayley(
            PM, Profile.parse("2;2,1"))) == 720
        assert sum(1 for _ in enumerate_sary(PM, Profile.parse("2;2,1"))) == 3

    def test_prime_counterexample_counts(self):
        assert sum(1 for _ in enumerate_sary(
            [-2, -1, 1], Profile.parse("1,1,1,2,1;1"))) == 107
        assert sum(1 for _ in enumerate_sary(
            [-1, 1, 2], Profile.parse("1,1,2,1,1,1"))) == 107

    def test_injective_quotient(self):
        for p in profiles_up_to(5):
            inj = sum(1 for t in enumerate_embedded_cayley(PM, p)
                      if t.is_injective())
            sary = sum(1 for _ in enumerate_sary(PM, p))
            assert inj == math.factorial(p.n) * sary, str(p)


class TestDeterminism:
    def test_streams_deterministic_and_duplicate_free(self):
        p = Profile.parse("1;2,1")
        S = StepSet([-1, 0, 1])
        runs = []
        for _ in range(2):
            runs.append([
                [sfunction_to_json(f)
                 for f in enumerate_sfunctions(S, p, "general")],
                [marked_stree_to_json(t)
                 for t in enumerate_marked_strees(S, p, "general")],
                [embedded_cayley_to_json(t)
                 for t in enumerate_embedded_cayley(S, p)],
                [sary_to_json(t) for t in enumerate_sary(S, p)],
            ])
        assert runs[0] == runs[1]
        for stream in runs[0]:
            assert len(stream) == len(set(stream))

    def test_ndjson_dump(self, tmp_path):
        path = tmp_path / "trees.ndjson"
        n = dump_ndjson(enumerate_sary(PM, Profile.parse("2;2,1")), path)
        assert n == 3
        lines = path.read_text().splitlines()
        assert len(lines) == 3 and all(line.startswith("{") for line in lines)


class TestBudget:
    def test_size_guard(self):
        with pytest.raises(BudgetExceeded):
            list(enumerate_embedded_cayley(PM, Profile([4, 4]),
                                           EnumerationBudget(max_size=7)))

    def test_step_cap_error(self):
        budget = EnumerationBudget(max_size=10, max_candidates=50)
        with pytest.raises(BudgetExceeded):
            list(enumerate_embedded_cayley(PM, Profile([3, 3]), budget))

    def test_step_cap_skip(self):
        budget = EnumerationBudget(max_size=10, max_candidates=50,
                                   on_exceed="skip")
        out = list(enumerate_embedded_cayley(PM, Profile([3, 3]), budget))
        assert len(out) < 100  # truncated, no exception


class TestCensus:
    def test_profile_census_of_binary_size3(self):
        # all 5 binary trees of size 3 across their vertical profiles
        total = 0
        for p in profiles_up_to(3):
            total += sum(1 for _ in enumerate_sary(PM, p) if True and p.n == 3)
        assert total == 5

    def test_out_census_three_vertices(self):
        census = census_by_type(
            enumerate_embedded_cayley(PM, Profile.parse("2,1")), "out")
        assert census == {(((0, -1), 1), ((1, 1), 1)): 6}

    def test_rooted_tree_cache(self):
        assert len(rooted_cayley_trees(4)) == 4 ** 3
        assert len(rooted_cayley_trees(5)) == 5 ** 4
