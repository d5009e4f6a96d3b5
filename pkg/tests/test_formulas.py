"""Closed-form counts against paper values and brute-force oracles."""

import math
from fractions import Fraction

import pytest

from embtrees import (
    HypothesisViolation,
    IncompatibleDistribution,
    InvalidProfile,
    NotInjective,
    Profile,
    StepSet,
    TargetTree,
    count_binary_horizontal,
    count_binary_profile,
    count_cayley_complete,
    count_cayley_in,
    count_cayley_out,
    count_cayley_profile,
    count_cayley_profile_ell1,
    count_cayley_profile_ell2,
    count_function_family,
    count_sary_in,
    count_sary_out,
    count_sary_profile,
    count_tree_in_tree,
    count_tree_in_tree_oracle,
    enumerate_embedded_cayley,
    enumerate_sfunctions,
    eval_out_gf,
    type_distribution_of,
)
from embtrees.oracle import (
    census_by_type,
    compatible_in_distributions,
    compatible_out_distributions,
)

from conftest import profiles_up_to

PM = StepSet([-1, 1])


class TestBinary:
    def test_horizontal(self):
        assert count_binary_horizontal([1, 2, 4, 3, 2]) == 840
        assert count_binary_horizontal([1]) == 1
        assert count_binary_horizontal([1, 2]) == 1
        with pytest.raises(InvalidProfile):
            count_binary_horizontal([2, 1])

    def test_vertical(self):
        assert count_binary_profile(Profile.parse("2;2,1")) == 3
        assert count_binary_profile(Profile.parse("1")) == 1
        assert count_binary_profile(Profile.parse("1,1,1")) == 1

    def test_vertical_equals_sary_pm(self):
        for p in profiles_up_to(6):
            assert count_binary_profile(p) == count_sary_profile(PM, p)


class TestProfileCounts:
    def test_paper_pins(self):
        assert count_cayley_profile(PM, Profile.parse("2;2,1")) == 720
        assert count_cayley_profile(StepSet([0, 1]), Profile.parse("3")) == 9
        assert count_cayley_profile(StepSet([1]), Profile.parse("1,2")) == 3
        assert count_sary_profile(PM, Profile.parse("2;2,1")) == 3
        assert count_sary_profile(StepSet([-1, 0, 1]), Profile.parse("1,1")) == 1
        assert count_sary_profile(StepSet([-1, 0, 1]), Profile.parse("1,2")) == 1

    def test_hypothesis_violation(self):
        with pytest.raises(HypothesisViolation):
            count_cayley_profile(StepSet([-2, -1, 1]), Profile.parse("1,1,1,2,1;1"))
        with pytest.raises(HypothesisViolation):
            count_sary_profile(StepSet([-2, -1, 1]), Profile.parse("1;1"))

    def test_pure_ascent_is_horizontal_profile(self):
        # with S = {1} the vertical profile is the horizontal one:
        # n!/prod n_i! prod n_i^{n_{i+1}}
        S = StepSet([1])
        for p in profiles_up_to(6, nonneg=True):
            if p.count(0) != 1:
                continue
            expected = Fraction(math.factorial(p.n))
            for i, ni in p.items():
                if i > 0:
                    expected /= math.factorial(ni)
                expected *= ni ** p.count(i + 1)
            assert count_cayley_profile(S, p) == expected

    def test_rerooting_identity(self):
        # n_ell T(n_ell..; n_0..n_r) = m_{-ell} T(m_0..m_{r-ell}) when the
        # profile is shifted so that ell' = 0
        for S in (PM, StepSet([-1, 0, 1])):
            for p in profiles_up_to(6):
                if p.ell == 0:
                    continue
                shifted = Profile(p.counts, ell=0)
                lhs = p.count(p.ell) * count_cayley_profile(S, p)
                rhs = shifted.count(-p.ell) * count_cayley_profile(S, shifted)
                assert lhs == rhs, (S, str(p))


class TestOutCounts:
    def test_hand_pins(self):
        assert count_cayley_out(PM, {(1, 1): 1, (0, -1): 1}) == 6
        assert count_cayley_out(PM, {}) == 1  # single vertex, empty products
        assert count_sary_out(PM, {(1, 1): 1, (0, -1): 1}) == 1
        assert count_sary_out(PM, {(1, 1): 3, (0, -1): 1}) == 0  # C(2,3) = 0

    def test_marginalization(self):
        for S in (PM, StepSet([-1, 0, 1]), StepSet([0, 1])):
            for p in profiles_up_to(5, nonneg=(S.m != -1) or None):
                total = sum(count_cayley_out(S, out)
                            for out in compatible_out_distributions(S, p))
                assert total == count_cayley_profile(S, p), (S, str(p))
                total_s = sum(count_sary_out(S, out)
                              for out in compatible_out_distributions(S, p))
                assert total_s == count_sary_profile(S, p), (S, str(p))

    def test_gf_all_ones_is_profile_count(self):
        for p in profiles_up_to(5):
            assert eval_out_gf(PM, p) == count_cayley_profile(PM, p)

    def test_gf_weighted_against_oracle(self):
        p = Profile.parse("2;2,1")
        weights = {(0, 1): Fraction(2)}
        total = Fraction(0)
        for t in enumerate_embedded_cayley(PM, p):
            d = type_distribution_of(t)
            total += Fraction(2) ** d.out.get((0, 1), 0)
        assert eval_out_gf(PM, p, weights) == total

    def test_gf_annihilated_by_zero_mandatory_weight(self):
        p = Profile.parse("2;2,1")
        assert eval_out_gf(PM, p, {(-1, -1): 0}) == 0


class TestInCounts:
    def test_degenerate_in_degree_sequence(self):
        # all mass at abscissa 0 with S = {0,1}: rooted Cayley trees with
        # in-degree sequence (2,0,0) -> 3
        S = StepSet([0, 1])
        inn = {(0, (2, 0)): 1, (0, (0, 0)): 2}
        assert count_cayley_in(S, inn) == 3

    def test_single_vertex(self):
        assert count_cayley_in(StepSet([0, 1]), {(0, (0, 0)): 1}) == 1
        assert count_sary_in(StepSet([0, 1]), {(0, (0, 0)): 1}) == 1

    def test_interval_required(self):
        with pytest.raises(HypothesisViolation):
            count_cayley_in(PM, {(0, (0, 0, 0)): 1})

    def test_not_injective(self):
        S = StepSet([-1, 0, 1])
        with pytest.raises(NotInjective):
            count_sary_in(S, {(0, (0, 0, 2)): 1, (1, (0, 0, 0)): 2})

    def test_marginalization(self):
        for S in (StepSet([-1, 0, 1]), StepSet([0, 1])):
            for p in profiles_up_to(5, nonneg=(S.m != -1) or None):
                total = 0
                total_s = 0
                for inn in compatible_in_distributions(S, p):
                    total += count_cayley_in(S, inn)
                    if all(max(cv) <= 1 for (_i, cv), c in inn.items() if c):
                        total_s += count_sary_in(S, inn)
                assert total == count_cayley_profile(S, p), (S, str(p))
                assert total_s == count_sary_profile(S, p), (S, str(p))

    def test_incompatible_rejected(self):
        S = StepSet([0, 1])
        with pytest.raises(IncompatibleDistribution):
            count_cayley_in(S, {(0, (1, 0)): 2})


class TestCompleteCounts:
    def test_single_vertex(self):
        assert count_cayley_complete(PM, (0, 0, 0), {}) == 1

    def test_r_zero_flagged_beyond_single_vertex(self):
        with pytest.raises(HypothesisViolation):
            count_cayley_complete(PM, (0, 0, 1), {})

    def test_zero_step_rejected(self):
        with pytest.raises(HypothesisViolation):
            count_cayley_complete(StepSet([-1, 0, 1]), (0, 0, 0, 1), {})

    def test_against_census_n3(self):
        self._census_check(Profile.parse("2,1"))

    def test_against_census_n5(self):
        self._census_check(Profile.parse("3,2"))

    @staticmethod
    def _census_check(profile):
        census = census_by_type(enumerate_embedded_cayley(PM, profile),
                                "complete")
        total = 0
        for (root_cv, comp_key), count in census.items():
            comp = {k: c for k, c in comp_key}
            assert count_cayley_complete(PM, root_cv, comp) == count
            total += count
        assert total == count_cayley_profile(PM, profile)


class TestFunctionFamilies:
    def test_profile_kinds(self):
        assert count_function_family(
            "profile", "nonneg", PM, profile=Profile.parse("2,1")) == 1
        assert count_function_family(
            "profile", "general", PM, profile=Profile.parse("2;2,1")) == 12
        assert count_function_family(
            "profile", "nonneg", PM, profile=Profile.parse("1,1")) == 1

    def test_profile_kinds_against_enumeration(self):
        for S in (PM, StepSet([-1, 0, 1])):
            for p in profiles_up_to(5):
                regime = "nonneg" if p.ell == 0 else "general"
                count = sum(1 for _ in enumerate_sfunctions(S, p, regime))
                assert count == count_function_family(
                    "profile", regime, S, profile=p), (S, str(p))
                inj = sum(1 for _ in enumerate_sfunctions(S, p, regime,
                                                          constraint="injective"))
                assert inj == count_function_family(
                    "injective_profile", regime, S, profile=p), (S, str(p))

    def test_counted_kinds_against_census(self):
        for S in (PM, StepSet([-1, 0, 1])):
            for p in profiles_up_to(4):
                regime = "nonneg" if p.ell == 0 else "general"
                funcs = list(enumerate_sfunctions(S, p, regime))
                census = census_by_type(funcs, "out")
                for key, count in census.items():
                    out = {k: c for k, c in key}
                    assert count == count_function_family(
                        "out_counted", regime, S, out=out), (S, str(p), key)
                census_in = census_by_type(funcs, "in")
                for key, count in census_in.items():
                    inn = {k: c for k, c in key}
                    if S.is_interval():
                        assert count == count_function_family(
                            "in_counted", regime, S, inn=inn), (S, str(p), key)

    def test_fixed_kinds_against_enumeration(self):
        S = StepSet([-1, 0, 1])
        for p in profiles_up_to(4, nonneg=True):
            funcs = list(enumerate_sfunctions(S, p, "nonneg"))
            by_types = {}
            for f in funcs:
                pre = {v: [0] * 3 for v in f.vertex_set.vertices()}
                for v, w in f.image.items():
                    pre[w][v.i - w.i - S.m] += 1
                key = tuple(sorted((v, tuple(cv)) for v, cv in pre.items()))
                by_types[key] = by_types.get(key, 0) + 1
            for key, count in by_types.items():
                vertex_in = {v: cv for v, cv in key}
                assert count == count_function_family(
                    "in_fixed", "nonneg", S, vertex_in_types=vertex_in), (str(p),)

    def test_complete_counted_matches_function_census(self):
        S = PM
        for p in profiles_up_to(4, nonneg=True):
            funcs = list(enumerate_sfunctions(S, p, "nonneg"))
            census = census_by_type(funcs, "complete")
            for (root_cv, comp_key), count in census.items():
                comp = {k: c for k, c in comp_key}
                assert count == count_function_family(
                    "complete_counted", "nonneg", S,
                    complete=comp, root_in=root_cv), (str(p),)


class TestBeyondMinusOne:
    def test_ell1_specializes(self):
        assert count_cayley_profile_ell1(PM, Profile.parse("2;2,1")) == 720
        for p in profiles_up_to(6):
            if p.ell != -1:
                continue
            assert count_cayley_profile_ell1(PM, p) == count_cayley_profile(PM, p)

    def test_ell1_oracle_min_step_minus_two(self):
        S = StepSet([-2, -1, 1])
        for counts, ell in [((1, 2, 1, 1), -1), ((2, 1, 1, 1), -1), ((1, 1, 2, 1), -1)]:
            p = Profile(counts, ell=ell)
            oracle = sum(1 for _ in enumerate_embedded_cayley(S, p))
            assert count_cayley_profile_ell1(S, p) == oracle, str(p)

    def test_ell2_oracle_min_step_minus_two(self):
        S = StepSet([-2, -1, 1])
        for counts in [(1, 1, 2, 1), (1, 2, 1, 1), (2, 1, 1, 1), (1, 1, 1, 2)]:
            p = Profile(counts, ell=-2)
            oracle = sum(1 for _ in enumerate_embedded_cayley(S, p))
            assert count_cayley_profile_ell2(S, p) == oracle, str(p)

    def test_wrong_ell_flagged(self):
        with pytest.raises(HypothesisViolation):
            count_cayley_profile_ell1(PM, Profile.parse("1,1"))
        with pytest.raises(HypothesisViolation):
            count_cayley_profile_ell2(PM, Profile.parse("2;2,1"))


class TestTreeInTree:
    def test_path_target_matches_pm_formula(self):
        t = TargetTree.of(0, [(-1, 0), (0, 1)], {-1: 2, 0: 2, 1: 1})
        assert count_tree_in_tree(t) == 720

    def test_point_target_counts_rooted_cayley(self):
        for n in range(1, 6):
            t = TargetTree.of(0, [], {0: n})
            assert count_tree_in_tree(t) == n ** (n - 1)

    def test_star_target_against_oracle(self):
        t = TargetTree.of(0, [(0, 1), (0, 2), (0, 3)], {0: 2, 1: 1, 2: 1, 3: 1})
        assert count_tree_in_tree(t) == count_tree_in_tree_oracle(t)
