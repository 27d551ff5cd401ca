import dataclasses
import math
from types import SimpleNamespace
from unittest.mock import patch

import pytest

from modules.catalog import catalog_groups, cyclic_group, direct_product
from modules.errors import BudgetExceededError, InputError, RefutationError
from modules.groups import symmetric_group
from modules.homomorphisms import enumerate_homs
from modules.theorems import (
    classify_max_tss,
    orbit_action,
    scan_group,
    verify_bound,
    verify_hoelder,
    verify_product_rigidity,
)


def holds(report):
    return {name: clause["holds"] for name, clause in report["clauses"].items()}


class TestClassify:
    def test_s3(self):
        report = classify_max_tss(3)
        assert report["success"]
        assert holds(report) == {
            "certificates": True,
            "transpositions_realize_3": True,
            "max_size_3": True,
            "every_class_subset_tss": True,
        }

    def test_s4_three_classes(self):
        report = classify_max_tss(4)
        assert report["success"]
        assert report["search"]["class_count"] == 3
        matches = report["clauses"]["classes_as_listed"]["matches"]
        assert matches["klein"] == ["(1 2)(3 4) (1 3)(2 4) (1 4)(2 3)"]

    def test_s5_star_only(self):
        report = classify_max_tss(5)
        assert report["success"]
        (structure,) = report["clauses"]["point_stabilizers"]["structure"]
        assert structure["stabilizer_order"] == 24
        assert structure["stabilizer_index"] == 5
        assert len(structure["fixed_points"]) == 1

    @pytest.mark.slow
    def test_s6_two_classes(self, tmp_db):
        report = classify_max_tss(6)
        assert report["success"]
        assert report["clauses"]["point_stabilizers"]["point_fixing_classes"] == 1

    def test_out_of_range(self):
        with pytest.raises(InputError):
            classify_max_tss(2)

    def test_budget(self):
        with pytest.raises(BudgetExceededError) as exc:
            classify_max_tss(5, budget_seconds=-1)
        assert exc.value.partial["complete"] is False


class TestHoelder:
    def test_s5_to_s4(self):
        report = verify_hoelder(5, 4)
        assert report["success"]
        assert report["homomorphisms"] == 10

    def test_s4_to_s3(self):
        report = verify_hoelder(4, 3)
        assert report["success"]
        assert report["clauses"]["conjugate_to_exceptional"]["count"] == 6

    def test_s4_to_s4(self):
        report = verify_hoelder(4, 4)
        assert report["success"]
        assert report["inner_automorphisms"] == 24
        assert report["out_order"] == 1

    def test_s5_to_s5(self):
        report = verify_hoelder(5, 5)
        assert report["success"]
        assert report["homomorphisms"] == 146
        assert report["tags"] == {"trivial": 1, "cyclic-image": 25, "inner-automorphism": 120}
        assert report["clauses"]["hom_set_closure"]["missing"] == 0

    def test_s6_to_s5(self):
        report = verify_hoelder(6, 5)
        assert report["success"]
        assert set(report["tags"]) <= {"trivial", "cyclic-image"}

    @pytest.mark.slow
    def test_s6_to_s6(self, tmp_db):
        report = verify_hoelder(6, 6)
        assert report["success"]
        assert report["automorphisms"] == 1440
        assert report["out_order"] == 2
        assert report["homomorphisms"] == 1516

    def test_collapse_image_sizes(self):
        report = verify_hoelder(4, 3)
        assert report["clauses"]["collapse_consistency"]["image_sizes"] == [1, 3]

    @pytest.mark.parametrize("n,m", [(3, 4), (7, 5), (4, 2)])
    def test_bad_degrees(self, n, m):
        with pytest.raises(InputError):
            verify_hoelder(n, m)

    def test_mislabelled_map_refutes(self):
        records = enumerate_homs(5, 4)
        forged = records[:-1] + [dataclasses.replace(records[-1], tag="inner-automorphism")]
        with patch("modules.theorems.enumerate_homs", return_value=forged):
            with pytest.raises(RefutationError) as exc:
                verify_hoelder(5, 4)
        report = exc.value.report
        assert report["success"] is False
        assert report["clauses"]["image_cyclic"]["holds"] is False
        assert report["clauses"]["image_cyclic"]["counterexamples"][0]["tag"] == "inner-automorphism"


class TestBound:
    def test_small_catalog(self):
        report = verify_bound(catalog_groups(24))
        assert report["success"]
        assert report["largest_max_tss"] == 3
        assert report["clauses"]["equality_case"]["groups"] == []

    def test_s5_equality_case(self, s5):
        result = scan_group(s5)
        assert result.max_tss == 4
        assert result.bound_ok
        assert result.equality_case
        assert result.iso_sym_confirmed
        (details,) = result.equality["classes"]
        assert details["stabilizer_maps_isomorphically"]
        assert details["orbit_size"] == 5
        assert details["orbit_action_injective"]
        assert details["intersection_sizes"] == [1]

    def test_violation_carries_certificate(self, s5):
        real = math.factorial
        inflated = SimpleNamespace(factorial=lambda n: 10**9 if n == 5 else real(n))
        with patch("modules.theorems.math", inflated):
            result = scan_group(s5)
        assert not result.bound_ok
        certificate = result.counterexample_certificate
        assert certificate["candidate"] == result.counterexample
        assert certificate["realized_group_order"] == 24
        assert len(certificate["witnesses"]) == 3

    def test_no_certificate_within_bound(self, s4):
        result = scan_group(s4)
        assert result.counterexample is None
        assert result.counterexample_certificate is None

    def test_c2_x_s4_within_bound(self, s4):
        result = scan_group(direct_product(cyclic_group(2), s4))
        assert result.order == 48
        assert result.bound_ok
        assert result.max_tss <= 3

    def test_results_keep_catalog_order(self):
        groups = catalog_groups(8)
        report = verify_bound(groups, jobs=2)
        assert [g["group_label"] for g in report["groups"]] == [g.label for g in groups]

    def test_budget_reports_incomplete(self):
        with pytest.raises(BudgetExceededError) as exc:
            verify_bound([symmetric_group(4)], budget_seconds=-1)
        assert exc.value.partial["incomplete"] == ["S4"]


class TestOrbitAction:
    def test_star_orbit_in_s4(self, s4, ids_of):
        action = orbit_action(s4, ids_of(s4, "(1 2)", "(1 3)", "(1 4)"))
        assert len(action.orbit) == 4
        assert action.injective
        assert action.image_order == 24

    def test_klein_orbit_is_trivial(self, s4, ids_of):
        action = orbit_action(s4, ids_of(s4, "(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)"))
        assert len(action.orbit) == 1
        assert action.image_order == 1
        assert not action.injective


class TestRigidity:
    def test_c2_x_s4(self):
        report = verify_product_rigidity(4)
        assert report["success"]
        assert report["clauses"]["several_classes"]["class_count"] >= 2

    def test_out_of_range(self):
        with pytest.raises(InputError):
            verify_product_rigidity(3)
