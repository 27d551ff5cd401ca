"""Finite permutation groups with indexed elements.

A ``FiniteGroup`` stores its elements in lexicographic image-table order, so
id 0 is always the identity. Bulk work (conjugating a set by every element,
scanning stabilizers) runs on numpy arrays of image tables; element lookup
goes through a base of the group: the images of the base points pin down an
element, and those images are packed into one integer code.
"""

import logging
import math
from collections import OrderedDict, deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import CONJ_CACHE_IDS, ELEMENT_CAP, ENTRY_CAP, TABLE_CAP
from modules.errors import CapExceededError, DegreeMismatchError, InvalidElementError
from modules.permutation import (
    Permutation,
    enumerate_sym,
    format_perm,
    long_cycle,
    transposition,
)

logger = logging.getLogger(__name__)

_CODE_LIMIT = 2**62


@dataclass(frozen=True)
class ConjugacyClass:
    representative_id: int
    member_ids: Tuple[int, ...]
    # transporter_ids[i] * rep * transporter_ids[i]^-1 == member_ids[i]
    transporter_ids: Tuple[int, ...] = field(repr=False, default=())

    @property
    def size(self):
        return len(self.member_ids)


@dataclass(frozen=True)
class SubsetOrbitRecord:
    base_set: Tuple[int, ...]
    orbit: List[Tuple[int, ...]]
    stabilizer_ids: Tuple[int, ...]

    @property
    def orbit_size(self):
        return len(self.orbit)


class FiniteGroup:
    """Indexed element universe of a permutation group."""

    def __init__(self, elements: Sequence[Permutation], label: str, generators: Optional[Sequence[Permutation]] = None):
        elements = sorted(set(elements))
        if not elements:
            raise ValueError("A group needs at least the identity")
        degree = elements[0].degree
        for p in elements:
            if p.degree != degree:
                raise DegreeMismatchError(degree, p.degree)
        if not elements[0].is_identity():
            raise ValueError(f"{label}: identity is missing from the element list")

        self.label = label
        self.degree = degree
        self.elements: List[Permutation] = elements
        self.index: Dict[Permutation, int] = {p: i for i, p in enumerate(elements)}
        self.identity_id = 0
        self.id_dtype = np.uint16 if len(elements) < 2**16 else np.uint32
        self._generators = tuple(generators) if generators is not None else None

        self.images = np.array([p.images for p in elements], dtype=np.int32).reshape(len(elements), degree)
        self.inverse_images = np.argsort(self.images, axis=1).astype(np.int32)
        self._build_lookup()
        self.inv = self.lookup(self.inverse_images)

        self._mul = None
        self._orders = None
        self._classes = None
        self._class_of = None
        # bounded LRU of full conjugation columns
        self._conj_cache: "OrderedDict[int, np.ndarray]" = OrderedDict()
        self._conj_cache_size = max(16, CONJ_CACHE_IDS // max(self.order, 1))

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FiniteGroup({self.label}, order={self.order}, degree={self.degree})"

    @property
    def order(self):
        return len(self.elements)

    @property
    def generators(self) -> Tuple[Permutation, ...]:
        if self._generators is None:
            self._generators = tuple(self.elements[i] for i in self._greedy_generators())
        return self._generators

    def _greedy_generators(self):
        gens = []
        reached = {self.identity_id}
        for g in range(self.order):
            if g not in reached:
                gens.append(g)
                reached = set(self.generated_subgroup(gens))
        return gens

    # --- element lookup ---

    def _build_lookup(self):
        stab = np.arange(self.order)
        points = np.arange(self.degree)
        base = []
        while len(stab) > 1:
            moved = (self.images[stab] != points).any(axis=0)
            p = int(np.argmax(moved))
            base.append(p)
            stab = stab[self.images[stab, p] == p]
        self.base = tuple(base)

        self._row_index = None
        if self.degree ** len(base) < _CODE_LIMIT:
            self._weights = np.array([self.degree**j for j in range(len(base))], dtype=np.int64)
            codes = self.images[:, list(base)].astype(np.int64) @ self._weights
            order = np.argsort(codes, kind="stable")
            self._sorted_codes = codes[order]
            self._code_ids = order.astype(self.id_dtype)
        else:
            self._weights = None
            self._row_index = {row.tobytes(): i for i, row in enumerate(self.images)}

    def lookup(self, rows) -> np.ndarray:
        """Ids of the group elements whose image tables are the given rows."""
        rows = np.asarray(rows, dtype=np.int32).reshape(-1, self.degree)
        if self._weights is not None:
            codes = rows[:, list(self.base)].astype(np.int64) @ self._weights
            return self._code_ids[np.searchsorted(self._sorted_codes, codes)]
        return np.array([self._row_index[np.ascontiguousarray(r).tobytes()] for r in rows], dtype=self.id_dtype)

    def id_of(self, p: Permutation) -> int:
        try:
            return self.index[p]
        except KeyError:
            raise InvalidElementError(f"{format_perm(p)} is not an element of {self.label}") from None

    def perm(self, g: int) -> Permutation:
        return self.elements[g]

    def notation(self, g: int) -> str:
        return format_perm(self.elements[int(g)])

    def check_ids(self, ids) -> Tuple[int, ...]:
        ids = tuple(int(i) for i in ids)
        for i in ids:
            if i < 0 or i >= self.order:
                raise InvalidElementError(f"Element id {i} outside 0..{self.order - 1} in {self.label}")
        return ids

    # --- arithmetic ---

    @property
    def mul(self) -> np.ndarray:
        """Composition table: mul[a, b] is the id of a∘b."""
        if self._mul is None:
            if self.order > TABLE_CAP:
                raise CapExceededError(f"{self.label}: order {self.order} exceeds the table cap {TABLE_CAP}")
            table = np.empty((self.order, self.order), dtype=self.id_dtype)
            for a in range(self.order):
                table[a] = self.lookup(self.images[a][self.images])
            self._mul = table
        return self._mul

    def multiply(self, a: int, b: int) -> int:
        if self.order <= TABLE_CAP:
            return int(self.mul[a, b])
        return self.index[self.elements[a] * self.elements[b]]

    def power(self, a: int, exponent: int) -> int:
        base = a if exponent >= 0 else int(self.inv[a])
        result = self.identity_id
        for _ in range(abs(exponent)):
            result = self.multiply(result, base)
        return result

    def conjugate(self, g: int, x: int) -> int:
        cached = self._conj_cache.get(x)
        if cached is not None:
            return int(cached[g])
        return int(self.conjugate_by([g], x)[0])

    def conjugate_by(self, g_ids, x: int) -> np.ndarray:
        """Ids of g·x·g⁻¹ for the listed g only; nothing is cached."""
        g_ids = np.asarray(g_ids, dtype=np.int64)
        gx = self.images[g_ids][:, self.images[x]]
        return self.lookup(np.take_along_axis(gx, self.inverse_images[g_ids], axis=1))

    @property
    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            self._orders = np.array([p.order() for p in self.elements], dtype=np.int64)
        return self._orders

    def commute(self, a: int, b: int) -> bool:
        return self.multiply(a, b) == self.multiply(b, a)

    def conjugation_images(self, x: int) -> np.ndarray:
        """Array whose entry g is the id of g·x·g⁻¹."""
        cached = self._conj_cache.get(x)
        if cached is not None:
            self._conj_cache.move_to_end(x)
            return cached
        gx = self.images[:, self.images[x]]
        cached = self.lookup(np.take_along_axis(gx, self.inverse_images, axis=1))
        self._conj_cache[x] = cached
        if len(self._conj_cache) > self._conj_cache_size:
            self._conj_cache.popitem(last=False)
        return cached

    def conjugation_table(self, ids) -> np.ndarray:
        """(order × len(ids)) array; row g holds g·y·g⁻¹ for each y in ids."""
        return np.stack([self.conjugation_images(int(y)) for y in ids], axis=1)

    def generated_subgroup(self, gen_ids) -> List[int]:
        reached = {self.identity_id}
        queue = deque([self.identity_id])
        while queue:
            a = queue.popleft()
            for s in gen_ids:
                b = self.multiply(s, a)
                if b not in reached:
                    reached.add(b)
                    queue.append(b)
        return sorted(reached)

    def is_subgroup(self, ids) -> bool:
        members = set(ids)
        if self.identity_id not in members:
            return False
        return all(int(self.inv[a]) in members and all(self.multiply(a, b) in members for b in members) for a in members)

    # --- classes ---

    def conjugacy_classes(self) -> List[ConjugacyClass]:
        if self._classes is None:
            class_of = np.full(self.order, -1, dtype=np.int64)
            classes = []
            for x in range(self.order):
                if class_of[x] >= 0:
                    continue
                conj = self.conjugation_images(x)
                members, first = np.unique(conj, return_index=True)
                class_of[members] = len(classes)
                classes.append(
                    ConjugacyClass(
                        representative_id=x,
                        member_ids=tuple(int(m) for m in members),
                        transporter_ids=tuple(int(t) for t in first),
                    )
                )
            self._classes = classes
            self._class_of = class_of
            logger.debug(f"{self.label}: {len(classes)} conjugacy classes")
        return self._classes

    def class_of(self, x: int) -> ConjugacyClass:
        self.conjugacy_classes()
        return self._classes[int(self._class_of[x])]

    def centralizer(self, x: int) -> List[int]:
        (x,) = self.check_ids([x])
        return [int(g) for g in np.flatnonzero(self.conjugation_images(x) == x)]

    def setwise_conj_stabilizer(self, ids) -> List[int]:
        ids = self._nonempty(ids)
        table = self.conjugation_table(ids)
        mask = np.isin(table, ids).all(axis=1)
        return [int(g) for g in np.flatnonzero(mask)]

    def subset_orbit(self, ids) -> SubsetOrbitRecord:
        ids = self._nonempty(ids)
        table = self.conjugation_table(ids)
        orbit = np.unique(np.sort(table, axis=1), axis=0)
        stabilizer = np.flatnonzero(np.isin(table, ids).all(axis=1))
        return SubsetOrbitRecord(
            base_set=tuple(sorted(ids)),
            orbit=[tuple(int(v) for v in row) for row in orbit],
            stabilizer_ids=tuple(int(g) for g in stabilizer),
        )

    def _nonempty(self, ids):
        ids = self.check_ids(ids)
        if not ids:
            raise InvalidElementError("The set must be nonempty")
        if len(set(ids)) != len(ids):
            raise InvalidElementError(f"Repeated element in {ids}")
        return ids

    def fixed_points(self, ids) -> List[int]:
        """1-based points fixed by every listed element."""
        rows = self.images[list(ids)]
        return [int(p) + 1 for p in np.flatnonzero((rows == np.arange(self.degree)).all(axis=0))]


# --- module-level operations ---


def close_generators(gens: Sequence[Permutation], label: str, degree: Optional[int] = None, cap: Optional[int] = None):
    """Breadth-first closure of the generators into a FiniteGroup."""
    cap = ELEMENT_CAP if cap is None else cap
    gens = list(gens)
    if degree is None:
        if not gens:
            raise ValueError("The degree is required when there are no generators")
        degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise DegreeMismatchError(degree, g.degree)

    identity = tuple(range(degree))
    gen_images = [g.images for g in gens if not g.is_identity()]
    seen = {identity}
    frontier = [identity]
    while frontier:
        next_frontier = []
        for p in frontier:
            for g in gen_images:
                q = tuple(g[i] for i in p)
                if q not in seen:
                    seen.add(q)
                    next_frontier.append(q)
                    if len(seen) > cap:
                        raise CapExceededError(f"{label}: closure exceeds {cap} elements")
                    if len(seen) * degree > ENTRY_CAP:
                        raise CapExceededError(
                            f"{label}: {len(seen)} elements on {degree} points exceed the entry cap {ENTRY_CAP}"
                        )
        frontier = next_frontier
    logger.info(f"Closed {label}: order {len(seen)}, degree {degree}")
    return FiniteGroup([Permutation(p) for p in seen], label, generators=gens)


def symmetric_group(n: int) -> FiniteGroup:
    gens = [transposition(1, 2, n), long_cycle(n)] if n >= 2 else []
    return FiniteGroup(enumerate_sym(n), f"S{n}", generators=gens)


def conjugacy_classes(group: FiniteGroup) -> List[ConjugacyClass]:
    return group.conjugacy_classes()


def setwise_conj_stabilizer(group: FiniteGroup, ids) -> List[int]:
    return group.setwise_conj_stabilizer(ids)


def subset_orbit(group: FiniteGroup, ids) -> SubsetOrbitRecord:
    return group.subset_orbit(ids)


def centralizer(group: FiniteGroup, x: int) -> List[int]:
    return group.centralizer(x)


def subgroup_index(group: FiniteGroup, subgroup_ids) -> int:
    return group.order // len(set(subgroup_ids))


def satisfies_sym_presentation(group: FiniteGroup, t: int, c: int, m: int) -> bool:
    """Check the S_m relations on t ↦ (1 2), c ↦ (1 2 … m).

    t² = cᵐ = (tc)ᵐ⁻¹ = (t·c⁻¹·t·c)³ = e and (t·cⁱ·t·c⁻ⁱ)² = e for 2 ≤ i ≤ m/2.
    """
    e = group.identity_id
    mul = group.multiply
    if mul(t, t) != e:
        return False
    if group.power(c, m) != e:
        return False
    if group.power(mul(t, c), m - 1) != e:
        return False
    if m >= 3:
        c_inv = int(group.inv[c])
        if group.power(mul(mul(t, c_inv), mul(t, c)), 3) != e:
            return False
    for i in range(2, m // 2 + 1):
        ci = group.power(c, i)
        word = mul(mul(t, ci), mul(t, int(group.inv[ci])))
        if mul(word, word) != e:
            return False
    return True


def extend_generator_map(source: FiniteGroup, source_gens, target: FiniteGroup, target_images) -> Optional[np.ndarray]:
    """Extend generator images to a value table, or None if that is not a homomorphism.

    Every edge a → a·s of the Cayley graph is checked, so an accepted table
    satisfies f(a·s) = f(a)·f(s) for all a and every generator s.
    """
    table = np.full(source.order, -1, dtype=np.int64)
    table[source.identity_id] = target.identity_id
    gen_ids = [source.id_of(g) for g in source_gens]
    images = [int(v) for v in target_images]
    queue = deque([source.identity_id])
    while queue:
        a = queue.popleft()
        fa = int(table[a])
        for s, fs in zip(gen_ids, images):
            b = source.multiply(a, s)
            value = target.multiply(fa, fs)
            if table[b] < 0:
                table[b] = value
                queue.append(b)
            elif table[b] != value:
                return None
    if (table < 0).any():
        return None
    return table


def is_isomorphic_to_sym(group: FiniteGroup, m: int) -> Tuple[bool, Optional[Dict[str, Permutation]]]:
    """Decide G ≅ S_m; on success return images of (1 2) and (1 2 … m)."""
    if group.order != math.factorial(m):
        return False, None
    if m <= 1:
        return True, {}
    orders = group.element_orders
    involution_classes = [cls.representative_id for cls in group.conjugacy_classes() if orders[cls.representative_id] == 2]
    long_elements = [int(c) for c in np.flatnonzero(orders == m)]
    source = symmetric_group(m)
    for t in involution_classes:
        for c in long_elements:
            if not satisfies_sym_presentation(group, t, c, m):
                continue
            if len(group.generated_subgroup([t, c])) != group.order:
                continue
            if extend_generator_map(source, source.generators, group, [t, c]) is None:
                continue
            witness = {
                format_perm(transposition(1, 2, m)): group.perm(t),
                format_perm(long_cycle(m)): group.perm(c),
            }
            logger.info(f"{group.label} ≅ S{m} via t={group.notation(t)}, c={group.notation(c)}")
            return True, witness
    return False, None
