"""Executable checks of the size bound, the S_n classification and Hölder's theorem.

Every runner returns a report dict with ``success`` and per-clause results.
A failed clause raises ``RefutationError`` carrying the full report, so the
command line can print the counterexample and exit with the refutation code.
"""

import itertools
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from modules.catalog import cyclic_group, direct_product
from modules.errors import BudgetExceededError, InputError, RefutationError
from modules.groups import FiniteGroup, is_isomorphic_to_sym, subgroup_index, symmetric_group
from modules.homomorphisms import (
    HomRecord,
    enumerate_homs,
    exceptional_map,
    inner_pairs,
    outer_automorphism_s6,
    sym,
    tag_counts,
)
from modules.permutation import Permutation, long_cycle, parse_perm, transposition
from modules.reports import certificate_to_dict, class_report_to_dict, hom_record_to_dict
from modules.search import enumerate_tss, subsets_conjugate
from modules.symmetric_sets import CandidateSet, is_commuting_tss, is_totally_symmetric, star_transpositions
from modules.workers import run_parallel

logger = logging.getLogger(__name__)

CLASSIFY_RANGE = range(3, 8)
HOELDER_MAX = 6
RIGIDITY_RANGE = range(4, 7)


def _clause(holds: bool, **details) -> Dict[str, Any]:
    return {"holds": bool(holds), **details}


def _finish(name: str, report: Dict[str, Any]) -> Dict[str, Any]:
    failed = [k for k, v in report["clauses"].items() if not v["holds"]]
    report["success"] = not failed
    for k in sorted(report["clauses"]):
        level = logging.INFO if report["clauses"][k]["holds"] else logging.WARNING
        logger.log(level, f"{name}: {k} {'holds' if report['clauses'][k]['holds'] else 'FAILS'}")
    if failed:
        raise RefutationError(f"{name}: failed clauses {', '.join(sorted(failed))}", report=report)
    return report


def _ids(group: FiniteGroup, perms: Sequence[Permutation]):
    return tuple(sorted(group.id_of(p) for p in perms))


# --- size bound over a catalog ---


@dataclass
class BoundScanResult:
    group_label: str
    order: int
    max_tss: int
    bound_ok: bool
    equality_case: bool
    iso_sym_confirmed: Optional[bool] = None
    commuting_ok: bool = True
    complete: bool = True
    counterexample: Optional[List[str]] = None
    counterexample_certificate: Optional[Dict[str, Any]] = None
    equality: Dict[str, Any] = field(default_factory=dict)


@dataclass
class OrbitAction:
    """Conjugation action of G on the orbit of a set; row g lists the image index of each orbit member."""

    orbit: List[tuple]
    images: np.ndarray

    @property
    def image_order(self):
        return len(np.unique(self.images, axis=0))

    @property
    def injective(self):
        return self.image_order == len(self.images)


def orbit_action(group: FiniteGroup, ids) -> OrbitAction:
    orbit = group.subset_orbit(ids).orbit
    position = {ys: i for i, ys in enumerate(orbit)}
    images = np.empty((group.order, len(orbit)), dtype=np.int64)
    for j, ys in enumerate(orbit):
        moved = np.sort(group.conjugation_table(ys), axis=1)
        images[:, j] = [position[tuple(int(v) for v in row)] for row in moved]
    return OrbitAction(orbit=orbit, images=images)


def _equality_details(group: FiniteGroup, ids, k: int) -> Dict[str, Any]:
    record = group.subset_orbit(ids)
    action = orbit_action(group, ids)
    base = set(ids)
    sizes = sorted({len(base & set(ys)) for ys in record.orbit if set(ys) != base})
    return {
        "stabilizer_order": len(record.stabilizer_ids),
        "stabilizer_maps_isomorphically": len(record.stabilizer_ids) == math.factorial(k),
        "orbit_size": record.orbit_size,
        "orbit_size_is_k_plus_1": record.orbit_size == k + 1,
        "orbit_action_injective": action.injective,
        "orbit_action_image_order": action.image_order,
        "intersection_sizes": sizes,
    }


def scan_group(group: FiniteGroup, budget_seconds: Optional[float] = None) -> BoundScanResult:
    """Largest TSS size of one group, the bound check and the equality-case structure."""
    result = BoundScanResult(group.label, group.order, 1, True, False)
    reports = {}
    k = 2
    while True:
        report = enumerate_tss(group, k, True, budget_seconds)
        if not report.complete:
            logger.warning(f"{group.label}: budget exhausted at size {k}")
            result.complete = False
            break
        if not report.classes:
            break
        reports[k] = report
        result.max_tss = k
        for entry in report.classes:
            candidate = CandidateSet(group, entry.representative)
            if is_commuting_tss(candidate) and group.order < math.factorial(k) * 2 ** (k - 1):
                result.commuting_ok = False
                result.counterexample = candidate.notation()
                result.counterexample_certificate = certificate_to_dict(entry.certificate, candidate)
        k += 1

    k = result.max_tss
    result.bound_ok = k <= 3 or group.order >= math.factorial(k + 1)
    if not result.bound_ok:
        entry = reports[k].classes[0]
        candidate = CandidateSet(group, entry.representative)
        result.counterexample = candidate.notation()
        result.counterexample_certificate = certificate_to_dict(entry.certificate, candidate)
    result.equality_case = k > 3 and group.order == math.factorial(k + 1)
    if result.equality_case:
        result.iso_sym_confirmed = is_isomorphic_to_sym(group, k + 1)[0]
        result.equality = {
            "classes": [_equality_details(group, entry.representative, k) for entry in reports[k].classes]
        }
    return result


def _scan_entry(args):
    group, budget_seconds = args
    return scan_group(group, budget_seconds)


def _equality_ok(result: BoundScanResult) -> bool:
    if not result.equality_case:
        return True
    return bool(result.iso_sym_confirmed) and all(
        c["stabilizer_maps_isomorphically"] and c["orbit_size_is_k_plus_1"] and c["orbit_action_injective"]
        for c in result.equality["classes"]
    )


def verify_bound(
    catalog: Sequence[FiniteGroup], budget_seconds: Optional[float] = None, jobs: int = 1
) -> Dict[str, Any]:
    """Run the bound scanner over every group; results keep catalog order."""
    results: List[BoundScanResult] = run_parallel(_scan_entry, [(g, budget_seconds) for g in catalog], jobs)
    report = {
        "groups": [asdict(r) for r in results],
        "largest_max_tss": max((r.max_tss for r in results), default=0),
        "clauses": {
            "bound": _clause(
                all(r.bound_ok for r in results),
                violations=[r.group_label for r in results if not r.bound_ok],
            ),
            "commuting_bound": _clause(
                all(r.commuting_ok for r in results),
                violations=[r.group_label for r in results if not r.commuting_ok],
            ),
            "equality_case": _clause(
                all(_equality_ok(r) for r in results),
                groups=[r.group_label for r in results if r.equality_case],
                violations=[r.group_label for r in results if not _equality_ok(r)],
            ),
        },
    }
    incomplete = [r.group_label for r in results if not r.complete]
    if incomplete:
        report["incomplete"] = incomplete
        raise BudgetExceededError(f"Budget exhausted on {', '.join(incomplete)}", partial=report)
    return _finish("bound", report)


# --- classification of maximal TSS in S_n ---


def _point_structure(group: FiniteGroup, ids) -> Dict[str, Any]:
    stabilizer = group.setwise_conj_stabilizer(ids)
    index = subgroup_index(group, stabilizer)
    return {
        "stabilizer_order": len(stabilizer),
        "stabilizer_index": index,
        "fixed_points": group.fixed_points(stabilizer),
        "index_at_least_n": index >= group.degree or index <= 2,
    }


def _matches(group: FiniteGroup, reps, expected: Dict[str, Sequence[int]]) -> Dict[str, List[str]]:
    """For every expected set, the representatives conjugate to it (as notation)."""
    found = {}
    for name, ids in expected.items():
        found[name] = [
            " ".join(group.notation(y) for y in rep)
            for rep in reps
            if len(rep) == len(ids) and subsets_conjugate(group, ids, rep) is not None
        ]
    return found


def classify_max_tss(
    n: int, budget_seconds: Optional[float] = None, jobs: int = 1, use_cache: bool = True
) -> Dict[str, Any]:
    """Enumerate size n−1 TSS classes of S_n and compare against the known list."""
    if n not in CLASSIFY_RANGE:
        raise InputError(f"classify supports n in {CLASSIFY_RANGE.start}..{CLASSIFY_RANGE.stop - 1}, got {n}")
    group = symmetric_group(n)
    k = n - 1
    search = enumerate_tss(group, k, True, budget_seconds, jobs)
    if not search.complete:
        raise BudgetExceededError(f"S{n}: budget exhausted at size {k}", partial=class_report_to_dict(search, group))
    reps = search.orbit_representatives
    star = _ids(group, star_transpositions(n))
    report = {"n": n, "k": k, "search": class_report_to_dict(search, group), "clauses": {}}
    clauses = report["clauses"]

    for entry in search.classes:
        candidate = CandidateSet(group, entry.representative)
        if not entry.certificate.validate(candidate):
            clauses["certificates"] = _clause(False, candidate=candidate.notation())
    clauses.setdefault("certificates", _clause(True))

    if n == 3:
        bigger = enumerate_tss(group, 3, True, budget_seconds)
        beyond = enumerate_tss(group, 4, True, budget_seconds)
        triangle = _ids(group, [transposition(1, 2, 3), transposition(1, 3, 3), transposition(2, 3, 3)])
        clauses["transpositions_realize_3"] = _clause(triangle in bigger.orbit_representatives)
        clauses["max_size_3"] = _clause(not beyond.classes, size_4_classes=len(beyond.classes))
        failures = []
        for cls in group.conjugacy_classes():
            for r in range(1, cls.size + 1):
                for subset in itertools.combinations(cls.member_ids, r):
                    if not is_totally_symmetric(CandidateSet(group, subset))[0]:
                        failures.append([group.notation(y) for y in subset])
        clauses["every_class_subset_tss"] = _clause(not failures, failures=failures)
    elif n == 4:
        klein = _ids(group, [parse_perm(s, 4) for s in ("(1 2)(3 4)", "(1 3)(2 4)", "(1 4)(2 3)")])
        triangle = _ids(group, [transposition(1, 2, 4), transposition(1, 3, 4), transposition(2, 3, 4)])
        found = _matches(group, reps, {"star": star, "triangle": triangle, "klein": klein})
        clauses["three_classes"] = _clause(len(reps) == 3, class_count=len(reps))
        clauses["classes_as_listed"] = _clause(all(len(v) == 1 for v in found.values()), matches=found)
        clauses["klein_is_normal"] = _clause(group.subset_orbit(klein).orbit_size == 1)
    elif n == 6:
        outer = outer_automorphism_s6(use_cache=use_cache)
        table = outer.value_table()
        twisted = tuple(sorted(int(table[y]) for y in star))
        found = _matches(group, reps, {"star": star, "outer_image_of_star": twisted})
        clauses["two_classes"] = _clause(len(reps) == 2, class_count=len(reps))
        clauses["star_and_outer_image"] = _clause(all(len(v) == 1 for v in found.values()), matches=found)
    else:
        found = _matches(group, reps, {"star": star})
        clauses["one_class"] = _clause(len(reps) == 1, class_count=len(reps))
        clauses["conjugate_to_star"] = _clause(len(found["star"]) == 1, matches=found)

    if n >= 5:
        structure = [_point_structure(group, rep) for rep in reps]
        fixing = sum(1 for s in structure if s["fixed_points"])
        expected = 1 if n == 6 else len(reps)
        clauses["point_stabilizers"] = _clause(
            fixing == expected and all(s["stabilizer_index"] == n for s in structure),
            point_fixing_classes=fixing,
            structure=structure,
        )
        clauses["index_at_least_n"] = _clause(all(s["index_at_least_n"] for s in structure))
    return _finish(f"classify S{n}", report)


# --- Hölder: homomorphisms S_n → S_m ---


def _collapse_consistency(records: List[HomRecord], n: int, m: int) -> Dict[str, Any]:
    source, target = sym(n), sym(m)
    star = [source.id_of(p) for p in star_transpositions(n)]
    sizes = set()
    bad = []
    memo = {}
    for record in records:
        table = record.value_table()
        image = tuple(sorted({int(table[y]) for y in star}))
        sizes.add(len(image))
        if len(image) not in (1, n - 1):
            bad.append(hom_record_to_dict(record))
            continue
        if image not in memo:
            memo[image] = is_totally_symmetric(CandidateSet(target, image))[0]
        if not memo[image]:
            bad.append(hom_record_to_dict(record))
    return _clause(not bad, image_sizes=sorted(sizes), counterexamples=bad[:5])


def _conjugate_pair(group: FiniteGroup, pair, reference) -> bool:
    t, c = reference
    return bool(np.any((group.conjugation_images(t) == pair[0]) & (group.conjugation_images(c) == pair[1])))


def _hom_set_closure(records: List[HomRecord], n: int) -> Dict[str, Any]:
    """f∘a is again enumerated for every automorphism a and every homomorphism f."""
    source = sym(n)
    t0, c0 = (source.id_of(g) for g in source.generators)
    known = {(r.t_image, r.c_image) for r in records}
    automorphisms = [r for r in records if r.tag in ("inner-automorphism", "outer-automorphism")]
    missing = 0
    for a in automorphisms:
        a_table = a.value_table()
        for f in records:
            f_table = f.value_table()
            pair = (f_table[a_table[t0]], f_table[a_table[c0]])
            target = sym(f.m)
            if (target.perm(int(pair[0])), target.perm(int(pair[1]))) not in known:
                missing += 1
    return _clause(missing == 0, compositions=len(automorphisms) * len(records), missing=missing)


def verify_hoelder(n: int, m: int, jobs: int = 1, use_cache: bool = True) -> Dict[str, Any]:
    if not (n >= m > 2 and n <= HOELDER_MAX):
        raise InputError(f"hoelder needs {HOELDER_MAX} >= n >= m > 2, got n={n}, m={m}")
    records = enumerate_homs(n, m, jobs)
    counts = tag_counts(records)
    non_cyclic = [r for r in records if r.tag not in ("trivial", "cyclic-image")]
    report = {
        "n": n,
        "m": m,
        "homomorphisms": len(records),
        "tags": counts,
        "clauses": {},
    }
    clauses = report["clauses"]

    def offenders(allowed):
        return [hom_record_to_dict(r) for r in non_cyclic if r.tag not in allowed][:5]

    if n > m and (n, m) != (4, 3):
        bad = offenders(())
        clauses["image_cyclic"] = _clause(not bad, counterexamples=bad)
    elif (n, m) == (4, 3):
        reference = exceptional_map()
        target = sym(3)
        ref_pair = (target.id_of(reference.t_image), target.id_of(reference.c_image))
        bad = offenders(("exceptional-S4-S3",))
        unconjugated = [
            hom_record_to_dict(r)
            for r in non_cyclic
            if not _conjugate_pair(target, (target.id_of(r.t_image), target.id_of(r.c_image)), ref_pair)
        ]
        clauses["conjugate_to_exceptional"] = _clause(
            not bad and not unconjugated,
            exceptional=hom_record_to_dict(reference),
            count=len(non_cyclic),
            counterexamples=bad + unconjugated,
        )
    elif n == m == 4:
        bad = offenders(("inner-automorphism", "exceptional-embedded"))
        embedded_ok = True
        for r in non_cyclic:
            if r.tag != "exceptional-embedded":
                continue
            table = r.value_table()
            kernel = int(np.count_nonzero(table == sym(4).identity_id))
            image = r.image_ids
            embedded_ok &= kernel == 4 and bool(sym(4).fixed_points(image))
        clauses["inner_or_embedded"] = _clause(not bad and embedded_ok, counterexamples=bad)
    elif n == m == 6:
        bad = offenders(("inner-automorphism", "outer-automorphism"))
        clauses["non_cyclic_is_automorphism"] = _clause(not bad, counterexamples=bad)
    else:
        bad = offenders(("inner-automorphism",))
        clauses["non_cyclic_is_inner"] = _clause(not bad, counterexamples=bad)

    if n == m:
        inner = counts.get("inner-automorphism", 0)
        automorphisms = inner + counts.get("outer-automorphism", 0)
        report["automorphisms"] = automorphisms
        report["inner_automorphisms"] = inner
        report["out_order"] = automorphisms // inner if inner else 0
        clauses["inner_count"] = _clause(
            inner == math.factorial(n) == len(inner_pairs(n)), inner=inner, expected=math.factorial(n)
        )
        expected_out = 2 if n == 6 else 1
        clauses["out_order"] = _clause(report["out_order"] == expected_out, out_order=report["out_order"])
        if n == 6:
            outer = outer_automorphism_s6(use_cache=use_cache)
            report["outer_automorphism"] = hom_record_to_dict(outer)
            clauses["aut_order"] = _clause(automorphisms == 1440, automorphisms=automorphisms)
        if n <= 5:
            clauses["hom_set_closure"] = _hom_set_closure(records, n)

    clauses["collapse_consistency"] = _collapse_consistency(records, n, m)
    return _finish(f"hoelder S{n}->S{m}", report)


# --- C2 × S_n ---


def _product_element(n: int, z: bool, sigma: Permutation) -> Permutation:
    degree = n + 2
    left = long_cycle(2).extend(degree) if z else Permutation.identity(degree)
    return left * sigma.extend(degree, offset=2)


def verify_product_rigidity(n: int, budget_seconds: Optional[float] = None, jobs: int = 1) -> Dict[str, Any]:
    """In C2 × S_n the size n−1 classes include X_n and its central twist {(z, (1 i))}."""
    if n not in RIGIDITY_RANGE:
        raise InputError(f"rigidity supports n in {RIGIDITY_RANGE.start}..{RIGIDITY_RANGE.stop - 1}, got {n}")
    group = direct_product(cyclic_group(2), symmetric_group(n))
    search = enumerate_tss(group, n - 1, True, budget_seconds, jobs)
    beyond = enumerate_tss(group, n, True, budget_seconds, jobs)
    if not (search.complete and beyond.complete):
        raise BudgetExceededError(f"{group.label}: budget exhausted", partial=class_report_to_dict(search, group))
    reps = search.orbit_representatives
    plain = _ids(group, [_product_element(n, False, p) for p in star_transpositions(n)])
    twisted = _ids(group, [_product_element(n, True, p) for p in star_transpositions(n)])
    found = _matches(group, reps, {"star": plain, "twisted_star": twisted})
    report = {
        "n": n,
        "group": group.label,
        "search": class_report_to_dict(search, group),
        "clauses": {
            "max_size_n_minus_1": _clause(bool(reps) and not beyond.classes, size_n_classes=len(beyond.classes)),
            "several_classes": _clause(len(reps) >= 2, class_count=len(reps)),
            "star_and_twist_present": _clause(all(len(v) == 1 for v in found.values()), matches=found),
            "star_and_twist_distinct": _clause(subsets_conjugate(group, plain, twisted) is None),
        },
    }
    return _finish(f"rigidity C2xS{n}", report)
