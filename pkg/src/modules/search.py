"""Exhaustive, pruned enumeration of totally symmetric sets.

Candidates are tuples of one conjugacy class in ascending id order. A
partial tuple survives only if every ordered pair in it has the same pair
type (simultaneous-conjugacy class) and the partial set is itself totally
symmetric; both conditions are necessary for any totally symmetric
superset, so no result is ever pruned. Complete tuples are folded to
conjugation-orbit representatives with ``canonical_form``.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import BUDGET_SECONDS
from modules.errors import BudgetExceededError, InvalidElementError
from modules.groups import FiniteGroup
from modules.symmetric_sets import CandidateSet, TssCertificate, is_totally_symmetric
from modules.workers import run_parallel

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class PairTypeKey:
    """Lexicographically least (g·x·g⁻¹, g·y·g⁻¹) over all g."""

    first: int
    second: int


@dataclass
class TssClass:
    representative: Tuple[int, ...]
    orbit_size: int
    certificate: TssCertificate


@dataclass
class TssClassReport:
    group_label: str
    k: int
    classes: List[TssClass] = field(default_factory=list)
    total_count: int = 0
    complete: bool = True
    up_to_conjugacy: bool = True
    # every totally symmetric set, only filled when up_to_conjugacy is False
    members: Optional[List[Tuple[int, ...]]] = None

    @property
    def orbit_representatives(self):
        return [c.representative for c in self.classes]

    @property
    def orbit_sizes(self):
        return [c.orbit_size for c in self.classes]


class TssSearch:
    """Search state for one group: pair-type and total-symmetry memo tables."""

    def __init__(self, group: FiniteGroup, budget_seconds: Optional[float] = None, clock=time.monotonic):
        self.group = group
        self.clock = clock
        budget = BUDGET_SECONDS if budget_seconds is None else budget_seconds
        self.deadline = clock() + budget
        self.exhausted = False
        self._pair_keys: Dict[Tuple[int, int], PairTypeKey] = {}
        self._orbit_min: Dict[Tuple[int, int], int] = {}
        self._centralizers: Dict[int, np.ndarray] = {}
        self._tss_memo: Dict[Tuple[int, ...], bool] = {}
        self.nodes = 0

    # --- pair types ---

    def pair_type(self, x: int, y: int) -> PairTypeKey:
        if x == y:
            raise InvalidElementError("A pair type needs two distinct elements")
        key = self._pair_keys.get((x, y))
        if key is None:
            group = self.group
            cls = group.class_of(x)
            rep = cls.representative_id
            # t·rep·t⁻¹ = x, so t⁻¹ moves x to rep
            t = cls.transporter_ids[cls.member_ids.index(x)]
            z = group.conjugate(int(group.inv[t]), y)
            key = PairTypeKey(rep, self._min_under_centralizer(rep, z))
            self._pair_keys[(x, y)] = key
        return key

    def _min_under_centralizer(self, rep: int, z: int) -> int:
        value = self._orbit_min.get((rep, z))
        if value is None:
            cent = self._centralizers.get(rep)
            if cent is None:
                cent = np.asarray(self.group.centralizer(rep), dtype=np.int64)
                self._centralizers[rep] = cent
            value = int(self.group.conjugate_by(cent, z).min())
            self._orbit_min[(rep, z)] = value
        return value

    # --- canonical forms and memoized checks ---

    def canonical_form(self, ids: Sequence[int]) -> Tuple[int, ...]:
        table = np.sort(self.group.conjugation_table(ids), axis=1)
        best = np.lexsort(table.T[::-1])[0]
        return tuple(int(v) for v in table[best])

    def is_tss(self, ids: Sequence[int]) -> bool:
        key = self.canonical_form(ids)
        verdict = self._tss_memo.get(key)
        if verdict is None:
            verdict, _ = is_totally_symmetric(CandidateSet(self.group, key))
            self._tss_memo[key] = verdict
        return verdict

    # --- depth-first search ---

    def _out_of_time(self):
        if not self.exhausted and self.clock() > self.deadline:
            self.exhausted = True
            logger.warning(f"{self.group.label}: search budget exhausted after {self.nodes} nodes")
        return self.exhausted

    def units(self, k: int, up_to_conjugacy: bool) -> List[Tuple[int, ...]]:
        """Top-level work units: (y1,) for k = 1, else (y1, y2) with a 2-element TSS."""
        units = []
        for cls in self.group.conjugacy_classes():
            if cls.size < k:
                continue
            roots = [cls.representative_id] if up_to_conjugacy else list(cls.member_ids)
            for y1 in roots:
                if self._out_of_time():
                    return units
                if k == 1:
                    units.append((y1,))
                    continue
                for y2 in cls.member_ids:
                    if self._out_of_time():
                        return units
                    if y2 > y1 and self._pair_ok((y1,), y2, None):
                        units.append((y1, y2))
        return units

    def _pair_ok(self, partial, y, key):
        for x in partial:
            forward = self.pair_type(x, y)
            if key is None:
                key = forward
            if forward != key or self.pair_type(y, x) != key:
                return False
        return True

    def explore(self, unit: Tuple[int, ...], k: int) -> List[Tuple[int, ...]]:
        """All size-k TSS tuples extending the unit."""
        if self._out_of_time():
            return []
        if len(unit) == 1 or k <= 2:
            if len(unit) >= 2 and not self.is_tss(unit):
                return []
            return [unit] if len(unit) == k else []
        if not self.is_tss(unit):
            return []
        key = self.pair_type(unit[0], unit[1])
        cls = self.group.class_of(unit[0])
        candidates = [z for z in cls.member_ids if z > unit[1] and self._pair_ok(unit, z, key)]
        leaves = []
        self._extend(list(unit), candidates, key, k, leaves)
        return leaves

    def _extend(self, partial, candidates, key, k, leaves):
        self.nodes += 1
        if len(partial) == k:
            leaves.append(tuple(partial))
            return
        if len(partial) + len(candidates) < k or self._out_of_time():
            return
        for i, z in enumerate(candidates):
            if not self.is_tss(partial + [z]):
                continue
            rest = [w for w in candidates[i + 1:] if self._pair_ok([z], w, key)]
            self._extend(partial + [z], rest, key, k, leaves)
            if self.exhausted:
                return


# --- process-pool plumbing ---

_WORKER: Optional[TssSearch] = None


def _init_worker(group, budget_seconds):
    global _WORKER
    _WORKER = TssSearch(group, budget_seconds)


def _explore_unit(args):
    unit, k = args
    leaves = _WORKER.explore(unit, k)
    return leaves, _WORKER.exhausted


# --- public operations ---


def pair_type(group: FiniteGroup, x: int, y: int) -> PairTypeKey:
    return TssSearch(group).pair_type(x, y)


def canonical_form(group: FiniteGroup, ids: Sequence[int]) -> Tuple[int, ...]:
    ids = group.check_ids(ids)
    if not ids:
        raise InvalidElementError("The set must be nonempty")
    return TssSearch(group).canonical_form(ids)


def subsets_conjugate(group: FiniteGroup, ys: Sequence[int], zs: Sequence[int]) -> Optional[int]:
    """Some g with g·Y·g⁻¹ = Z as sets, or None."""
    ys, zs = group.check_ids(ys), group.check_ids(zs)
    if len(ys) != len(zs):
        raise InvalidElementError(f"Sets differ in size: {len(ys)} != {len(zs)}")
    search = TssSearch(group)
    if sorted(group.class_of(y).representative_id for y in ys) != sorted(
        group.class_of(z).representative_id for z in zs
    ):
        return None
    if len(ys) >= 2:
        y_types = sorted(search.pair_type(a, b) for a in ys for b in ys if a != b)
        z_types = sorted(search.pair_type(a, b) for a in zs for b in zs if a != b)
        if y_types != z_types:
            return None
    table = np.sort(group.conjugation_table(ys), axis=1)
    target = np.array(sorted(zs))
    hits = np.flatnonzero((table == target).all(axis=1))
    return int(hits[0]) if len(hits) else None


def enumerate_tss(
    group: FiniteGroup,
    k: int,
    up_to_conjugacy: bool = True,
    budget_seconds: Optional[float] = None,
    jobs: int = 1,
) -> TssClassReport:
    """Every size-k totally symmetric set of the group, grouped into conjugation orbits."""
    if k < 1:
        raise InvalidElementError("Target size must be at least 1")
    budget = BUDGET_SECONDS if budget_seconds is None else budget_seconds
    started = time.monotonic()
    search = TssSearch(group, budget)
    units = search.units(k, up_to_conjugacy)
    units_complete = not search.exhausted
    logger.info(f"{group.label}: searching k={k} over {len(units)} branches")

    if jobs > 1 and len(units) > 1:
        remaining = max(budget - (time.monotonic() - started), 0.0)
        outcomes = run_parallel(
            _explore_unit, [(u, k) for u in units], jobs, initializer=_init_worker, initargs=(group, remaining)
        )
    else:
        outcomes = []
        for unit in units:
            outcomes.append((search.explore(unit, k), search.exhausted))
            if search.exhausted:
                break
    complete = units_complete and len(outcomes) == len(units) and not any(exhausted for _, exhausted in outcomes)

    leaves = sorted({leaf for found, _ in outcomes for leaf in found})
    representatives = sorted({search.canonical_form(leaf) for leaf in leaves})
    report = TssClassReport(group_label=group.label, k=k, complete=complete, up_to_conjugacy=up_to_conjugacy)
    for rep in representatives:
        verdict, certificate = is_totally_symmetric(CandidateSet(group, rep))
        if not verdict:
            raise RuntimeError(f"{group.label}: search produced a non-TSS {rep}")
        orbit_size = group.subset_orbit(rep).orbit_size
        report.classes.append(TssClass(representative=rep, orbit_size=orbit_size, certificate=certificate))
    report.total_count = sum(report.orbit_sizes)
    if not up_to_conjugacy:
        report.members = leaves
    logger.info(
        f"{group.label}: k={k} → {len(report.classes)} classes, {report.total_count} sets"
        f"{'' if complete else ' (incomplete)'}"
    )
    return report


def max_tss_size(group: FiniteGroup, budget_seconds: Optional[float] = None, jobs: int = 1) -> int:
    """Largest k with a size-k TSS; sizes are tried upwards until one is empty."""
    k = 1
    while True:
        report = enumerate_tss(group, k + 1, True, budget_seconds, jobs)
        if not report.complete:
            raise BudgetExceededError(f"{group.label}: budget exhausted at size {k + 1}", partial=report)
        if not report.classes:
            return k
        k += 1
