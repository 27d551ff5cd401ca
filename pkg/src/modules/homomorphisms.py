"""Homomorphisms S_n → S_m by brute force over generator images.

A homomorphism is fixed by the images t, c of (1 2) and (1 2 … n). Candidate
pairs are filtered by element order and the defining relations of S_n, then
confirmed by extending them to a full value table.
"""

import logging
import sqlite3
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from config import SYM_CAP
from modules import database
from modules.errors import CapExceededError, InputError
from modules.groups import FiniteGroup, extend_generator_map, satisfies_sym_presentation, symmetric_group
from modules.permutation import Permutation, cycle_type, format_perm, long_cycle, parse_perm, transposition
from modules.search import subsets_conjugate
from modules.symmetric_sets import CandidateSet, is_totally_symmetric, star_transpositions
from modules.workers import run_parallel

logger = logging.getLogger(__name__)

TAGS = (
    "trivial",
    "cyclic-image",
    "inner-automorphism",
    "outer-automorphism",
    "exceptional-S4-S3",
    "exceptional-embedded",
    "unclassified",
)

OUTER_LABEL = "S6-outer"


@lru_cache(maxsize=None)
def sym(n: int) -> FiniteGroup:
    if n < 2:
        raise InputError(f"S{n}: homomorphisms need n >= 2")
    if n > SYM_CAP:
        raise CapExceededError(f"S{n}: degree exceeds the symmetric-group cap {SYM_CAP}")
    return symmetric_group(n)


@dataclass(frozen=True)
class HomRecord:
    n: int
    m: int
    t_image: Permutation
    c_image: Permutation
    tag: str
    table: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def images(self) -> Dict[str, str]:
        return {
            format_perm(transposition(1, 2, self.n)): format_perm(self.t_image),
            format_perm(long_cycle(self.n)): format_perm(self.c_image),
        }

    @property
    def image_ids(self) -> List[int]:
        return sorted(int(v) for v in np.unique(self.value_table()))

    def value_table(self) -> np.ndarray:
        """Target id of f(g) for every source id g."""
        if self.table is not None:
            return self.table
        source, target = sym(self.n), sym(self.m)
        table = extend_generator_map(
            source, source.generators, target, [target.id_of(self.t_image), target.id_of(self.c_image)]
        )
        if table is None:
            raise InputError(f"Images {self.images} do not define a homomorphism S{self.n} -> S{self.m}")
        object.__setattr__(self, "table", table)
        return table

    def __call__(self, p: Permutation) -> Permutation:
        return sym(self.m).perm(int(self.value_table()[sym(self.n).id_of(p)]))


def _candidates(n: int, m: int) -> Tuple[List[int], List[int]]:
    target = sym(m)
    orders = target.element_orders
    involutions = [int(g) for g in np.flatnonzero(orders <= 2)]
    cycles = [int(g) for g in np.flatnonzero(n % orders == 0)]
    return involutions, cycles


def _accepted_pairs(n: int, m: int, t_ids) -> Iterator[Tuple[int, int, np.ndarray]]:
    source, target = sym(n), sym(m)
    _, cycles = _candidates(n, m)
    for t in t_ids:
        for c in cycles:
            if not satisfies_sym_presentation(target, t, c, n):
                continue
            table = extend_generator_map(source, source.generators, target, [t, c])
            if table is not None:
                yield t, c, table


def _scan_involution(args):
    n, m, t = args
    return list(_accepted_pairs(n, m, [t]))


@lru_cache(maxsize=None)
def inner_pairs(n: int) -> frozenset:
    """(σ t σ⁻¹, σ c σ⁻¹) for every σ: the generator images of inner automorphisms."""
    group = sym(n)
    t, c = (group.id_of(g) for g in group.generators)
    return frozenset(zip(group.conjugation_images(t).tolist(), group.conjugation_images(c).tolist()))


def classify_hom(n: int, m: int, t: int, c: int, table: np.ndarray) -> str:
    """Tag of a homomorphism from its image subgroup; deterministic in (n, m, t, c)."""
    target = sym(m)
    image = np.unique(table)
    if len(image) == 1:
        return "trivial"
    if (target.element_orders[image] == len(image)).any():
        return "cyclic-image"
    if n == m and len(image) == target.order:
        return "inner-automorphism" if (t, c) in inner_pairs(n) else "outer-automorphism"
    if (n, m) == (4, 3):
        return "exceptional-S4-S3"
    if (n, m) == (4, 4) and len(image) == 6:
        return "exceptional-embedded"
    return "unclassified"


def enumerate_homs(n: int, m: int, jobs: int = 1) -> List[HomRecord]:
    """Every homomorphism S_n → S_m, sorted by the ids of the generator images."""
    target = sym(m)
    involutions, cycles = _candidates(n, m)
    logger.info(f"Scanning {len(involutions)} x {len(cycles)} generator images for S{n} -> S{m}")
    chunks = run_parallel(_scan_involution, [(n, m, t) for t in involutions], jobs)
    records = []
    for found in chunks:
        for t, c, table in found:
            tag = classify_hom(n, m, t, c, table)
            records.append(HomRecord(n, m, target.perm(t), target.perm(c), tag, table))
    if any(r.tag == "unclassified" for r in records):
        logger.warning(f"S{n} -> S{m}: unclassified homomorphisms present")
    logger.info(f"S{n} -> S{m}: {len(records)} homomorphisms")
    return records


def tag_counts(records: List[HomRecord]) -> Dict[str, int]:
    counts = {}
    for r in records:
        counts[r.tag] = counts.get(r.tag, 0) + 1
    return counts


def exceptional_map() -> HomRecord:
    """The S4 → S3 map (1 4) ↦ (1 2), (2 4) ↦ (1 3), (3 4) ↦ (2 3), found among enumerated maps."""
    wanted = {"(1 4)": "(1 2)", "(2 4)": "(1 3)", "(3 4)": "(2 3)"}
    for record in enumerate_homs(4, 3):
        if record.tag != "exceptional-S4-S3":
            continue
        if all(format_perm(record(parse_perm(x, 4))) == y for x, y in wanted.items()):
            return record
    raise RuntimeError("No S4 -> S3 homomorphism matches the exceptional images")


# --- the outer automorphism of S6 ---


def verify_outer_automorphism(t_image: Permutation, c_image: Permutation) -> Dict[str, bool]:
    """Every property the cached S6 automorphism must have, clause by clause."""
    group = sym(6)
    t, c = group.id_of(t_image), group.id_of(c_image)
    table = extend_generator_map(group, group.generators, group, [t, c])
    checks = {
        "relations": satisfies_sym_presentation(group, t, c, 6),
        "homomorphism": table is not None,
    }
    checks["bijective"] = table is not None and len(np.unique(table)) == group.order
    checks["non_inner"] = (t, c) not in inner_pairs(6)
    if table is not None:
        star = [group.id_of(p) for p in star_transpositions(6)]
        moved = [int(table[y]) for y in star]
        checks["image_of_star_tss"] = len(set(moved)) == 5 and is_totally_symmetric(CandidateSet(group, moved))[0]
        checks["image_of_star_not_conjugate"] = subsets_conjugate(group, star, moved) is None
        checks["transposition_to_triple"] = str(cycle_type(t_image)) == "[2,2,2]"
    return checks


def _search_outer() -> Tuple[int, int, np.ndarray]:
    involutions, _ = _candidates(6, 6)
    inner = inner_pairs(6)
    for t, c, table in _accepted_pairs(6, 6, involutions):
        if (t, c) not in inner and len(np.unique(table)) == 720:
            return t, c, table
    raise RuntimeError("No outer automorphism of S6 found")


def _load_cached_outer() -> Optional[HomRecord]:
    try:
        database.init_db()
    except sqlite3.Error as e:
        logger.warning(f"Automorphism cache unavailable: {e}")
        return None
    row = database.get_automorphism(OUTER_LABEL)
    if row is None:
        return None
    try:
        t_image, c_image = parse_perm(row["t_image"], 6), parse_perm(row["c_image"], 6)
    except InputError as e:
        logger.warning(f"Cached {OUTER_LABEL} is unreadable ({e}); recomputing")
        database.delete_automorphism(OUTER_LABEL)
        return None
    checks = verify_outer_automorphism(t_image, c_image)
    if not all(checks.values()):
        failed = [name for name, ok in checks.items() if not ok]
        logger.warning(f"Cached {OUTER_LABEL} failed verification ({', '.join(failed)}); recomputing")
        database.delete_automorphism(OUTER_LABEL)
        return None
    logger.info(f"Loaded {OUTER_LABEL} from cache")
    return HomRecord(6, 6, t_image, c_image, "outer-automorphism")


def outer_automorphism_s6(use_cache: bool = True) -> HomRecord:
    """First non-inner automorphism of S6 in candidate order, cached in the database."""
    if use_cache:
        cached = _load_cached_outer()
        if cached is not None:
            return cached
    group = sym(6)
    t, c, table = _search_outer()
    record = HomRecord(6, 6, group.perm(t), group.perm(c), "outer-automorphism", table)
    checks = verify_outer_automorphism(record.t_image, record.c_image)
    if not all(checks.values()):
        raise RuntimeError(f"Outer automorphism candidate failed verification: {checks}")
    if use_cache:
        database.save_automorphism(OUTER_LABEL, 6, format_perm(record.t_image), format_perm(record.c_image))
    return record
