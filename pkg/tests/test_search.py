import itertools
import time
from unittest.mock import patch

import pytest

from modules.catalog import cyclic_group
from modules.errors import BudgetExceededError, InvalidElementError
from modules.groups import symmetric_group
from modules.search import (
    TssSearch,
    canonical_form,
    enumerate_tss,
    max_tss_size,
    pair_type,
    subsets_conjugate,
)
from modules.symmetric_sets import CandidateSet, is_totally_symmetric, star_transpositions

KLEIN = ("(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)")


def brute_force_tss(group, k):
    found = set()
    for cls in group.conjugacy_classes():
        for ys in itertools.combinations(cls.member_ids, k):
            if is_totally_symmetric(CandidateSet(group, ys))[0]:
                found.add(tuple(sorted(ys)))
    return found


class TestPairType:
    def test_overlapping_transpositions(self, s4, ids_of):
        a, b, c = ids_of(s4, "(1 2)", "(1 3)", "(1 4)")
        assert pair_type(s4, a, b) == pair_type(s4, a, c)

    def test_disjoint_vs_overlapping(self, s4, ids_of):
        a, b, c = ids_of(s4, "(1 2)", "(3 4)", "(1 3)")
        assert pair_type(s4, a, b) != pair_type(s4, a, c)

    def test_conjugation_invariant(self, s4, ids_of):
        x, y = ids_of(s4, "(1 2 3)", "(2 4)")
        key = pair_type(s4, x, y)
        for g in range(24):
            assert pair_type(s4, s4.conjugate(g, x), s4.conjugate(g, y)) == key

    def test_is_least_simultaneous_conjugate(self, s4, ids_of):
        x, y = ids_of(s4, "(2 4)", "(1 3)(2 4)")
        least = min((s4.conjugate(g, x), s4.conjugate(g, y)) for g in range(24))
        key = pair_type(s4, x, y)
        assert (key.first, key.second) == least

    def test_equal_elements_rejected(self, s4):
        with pytest.raises(InvalidElementError):
            pair_type(s4, 3, 3)


class TestCanonicalForm:
    def test_constant_on_orbit(self, s4, ids_of):
        ys = ids_of(s4, "(1 2)", "(1 3)")
        form = canonical_form(s4, ys)
        for g in range(24):
            assert canonical_form(s4, [s4.conjugate(g, y) for y in ys]) == form

    def test_klein_is_its_own_form(self, s4, ids_of):
        klein = ids_of(s4, *KLEIN)
        assert canonical_form(s4, klein) == tuple(sorted(klein))

    def test_star_minimal_conjugate(self, s4, ids_of):
        star = ids_of(s4, "(1 2)", "(1 3)", "(1 4)")
        orbit = s4.subset_orbit(star).orbit
        assert canonical_form(s4, star) == min(orbit)

    def test_matches_subset_conjugacy(self, s4):
        pairs = list(itertools.combinations(range(1, 10), 2))
        for a, b in itertools.combinations(pairs, 2):
            same_form = canonical_form(s4, a) == canonical_form(s4, b)
            assert same_form == (subsets_conjugate(s4, a, b) is not None)


class TestSubsetsConjugate:
    def test_star_at_two(self, s4, ids_of):
        star = ids_of(s4, "(1 2)", "(1 3)", "(1 4)")
        other = ids_of(s4, "(2 1)", "(2 3)", "(2 4)")
        g = subsets_conjugate(s4, star, other)
        assert s4.notation(g) == "(1 2)"
        assert sorted(s4.conjugate(g, y) for y in star) == sorted(other)

    def test_different_cycle_types(self, s4, ids_of):
        assert subsets_conjugate(s4, ids_of(s4, "(1 2)", "(1 3)", "(1 4)"), ids_of(s4, *KLEIN)) is None

    def test_self(self, s4, ids_of):
        ys = ids_of(s4, "(1 2)", "(3 4)")
        assert subsets_conjugate(s4, ys, ys) == s4.identity_id

    def test_size_mismatch(self, s4):
        with pytest.raises(InvalidElementError):
            subsets_conjugate(s4, [1, 2], [1])


class TestEnumerateTss:
    def test_s5_size_4(self, s5):
        report = enumerate_tss(s5, 4)
        assert report.complete
        assert len(report.classes) == 1
        assert report.orbit_sizes == [5]
        star = [s5.id_of(p) for p in star_transpositions(5)]
        assert subsets_conjugate(s5, star, report.orbit_representatives[0]) is not None

    def test_s4_size_3(self, s4, ids_of):
        report = enumerate_tss(s4, 3)
        assert len(report.classes) == 3
        klein = tuple(sorted(ids_of(s4, *KLEIN)))
        assert klein in report.orbit_representatives
        assert sorted(report.orbit_sizes) == [1, 4, 4]
        assert report.total_count == 9

    @pytest.mark.slow
    def test_s6_size_5(self):
        report = enumerate_tss(symmetric_group(6), 5)
        assert len(report.classes) == 2

    def test_s3_size_3(self, s3, ids_of):
        report = enumerate_tss(s3, 3)
        triangle = tuple(sorted(ids_of(s3, "(1 2)", "(1 3)", "(2 3)")))
        assert report.orbit_representatives == [triangle]

    def test_singletons(self, s4):
        report = enumerate_tss(s4, 1)
        assert len(report.classes) == 5
        assert report.total_count == 24

    def test_too_large(self, s4):
        report = enumerate_tss(s4, 7)
        assert report.complete
        assert report.classes == []

    def test_bad_size(self, s4):
        with pytest.raises(InvalidElementError):
            enumerate_tss(s4, 0)

    def test_representatives_pairwise_non_conjugate(self, s5):
        reps = enumerate_tss(s5, 3).orbit_representatives
        for a, b in itertools.combinations(reps, 2):
            assert subsets_conjugate(s5, a, b) is None

    @pytest.mark.parametrize("n", [3, 4])
    def test_matches_brute_force(self, n):
        group = symmetric_group(n)
        for k in range(1, 5):
            expected = brute_force_tss(group, k)
            full = enumerate_tss(group, k, up_to_conjugacy=False)
            assert set(full.members) == expected
            orbits = enumerate_tss(group, k)
            assert orbits.total_count == len(expected)
            assert {canonical_form(group, ys) for ys in expected} == set(orbits.orbit_representatives)

    def test_every_class_subset_in_s3(self, s3):
        for cls in s3.conjugacy_classes():
            for k in range(1, cls.size + 1):
                found = set(enumerate_tss(s3, k, up_to_conjugacy=False).members)
                for ys in itertools.combinations(cls.member_ids, k):
                    assert ys in found

    def test_parallel_matches_inline(self, s4):
        inline = enumerate_tss(s4, 3, jobs=1)
        pooled = enumerate_tss(s4, 3, jobs=2)
        assert inline.orbit_representatives == pooled.orbit_representatives
        assert inline.orbit_sizes == pooled.orbit_sizes


class TestBudget:
    def test_exhausted_budget_marks_incomplete(self, s5):
        ticks = iter(range(10**6))
        search = TssSearch(s5, budget_seconds=2, clock=lambda: next(ticks))
        units = search.units(4, True)
        for unit in units:
            search.explore(unit, 4)
        assert search.exhausted

    def test_zero_budget(self, s5):
        report = enumerate_tss(s5, 4, budget_seconds=-1)
        assert not report.complete

    def test_units_stop_at_deadline(self, s5):
        ticks = iter(range(10**6))
        search = TssSearch(s5, budget_seconds=3, clock=lambda: next(ticks))
        units = search.units(2, False)
        assert search.exhausted
        assert len(units) < len(TssSearch(s5).units(2, False))

    def test_large_group_returns_promptly(self):
        group = symmetric_group(7)
        started = time.monotonic()
        report = enumerate_tss(group, 2, budget_seconds=1e-6)
        assert time.monotonic() - started < 5.0
        assert not report.complete
        assert len(group._conj_cache) <= group._conj_cache_size

    def test_bounded_conjugation_cache(self, monkeypatch):
        import modules.groups as groups_mod

        monkeypatch.setattr(groups_mod, "CONJ_CACHE_IDS", 24 * 20)
        group = symmetric_group(4)
        report = enumerate_tss(group, 3)
        assert len(group._conj_cache) <= 20
        assert sorted(report.orbit_sizes) == [1, 4, 4]

    def test_max_size_raises(self, s5):
        with patch("modules.search.BUDGET_SECONDS", -1.0):
            with pytest.raises(BudgetExceededError) as exc:
                max_tss_size(s5)
        assert exc.value.partial is not None


class TestMaxTssSize:
    def test_s3(self, s3):
        assert max_tss_size(s3) == 3

    def test_s5(self, s5):
        assert max_tss_size(s5) == 4

    def test_cyclic(self):
        assert max_tss_size(cyclic_group(6)) == 1
