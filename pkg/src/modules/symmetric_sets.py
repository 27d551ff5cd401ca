"""Total symmetry: verification, certificates, G-sets and the collapse check.

A tuple Y = (y_1, …, y_k) is totally symmetric when every permutation of
its positions is realized by conjugation. The setwise stabilizer of Y maps
onto a subgroup of S_k; Y is totally symmetric exactly when that image has
order k!.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from modules.errors import EquivarianceError, InvalidElementError
from modules.groups import FiniteGroup
from modules.permutation import Permutation, transposition

logger = logging.getLogger(__name__)

SCAN_CHUNK = 1024

# Permutations of tuple positions are 0-based tuples: sigma[i] is the position
# that y_i is sent to.
PositionPerm = Tuple[int, ...]


@dataclass(frozen=True)
class CandidateSet:
    group: FiniteGroup = field(repr=False)
    member_ids: Tuple[int, ...]

    def __post_init__(self):
        ids = self.group.check_ids(self.member_ids)
        if not ids:
            raise InvalidElementError("A candidate set must be nonempty")
        if len(set(ids)) != len(ids):
            raise InvalidElementError(f"Candidate members must be distinct: {ids}")
        object.__setattr__(self, "member_ids", ids)

    @classmethod
    def from_perms(cls, group: FiniteGroup, perms: Sequence[Permutation]):
        return cls(group, tuple(group.id_of(p) for p in perms))

    @property
    def size(self):
        return len(self.member_ids)

    def notation(self) -> List[str]:
        return [self.group.notation(y) for y in self.member_ids]


@dataclass
class TssCertificate:
    """Witnesses for the adjacent transpositions (i, i+1), 1-based positions."""

    witnesses: Dict[Tuple[int, int], int]
    realized_group_order: int

    def validate(self, candidate: CandidateSet) -> bool:
        """Re-check every witness by direct conjugation of the tuple."""
        group, ys = candidate.group, candidate.member_ids
        k = len(ys)
        if self.realized_group_order == math.factorial(k) and set(self.witnesses) != set(_adjacent_pairs(k)):
            return False
        for (i, j), g in self.witnesses.items():
            expected = list(ys)
            expected[i - 1], expected[j - 1] = expected[j - 1], expected[i - 1]
            if [group.conjugate(g, y) for y in ys] != expected:
                return False
        return True

    def witness_for(self, sigma: PositionPerm, group: FiniteGroup) -> int:
        """Compose adjacent-transposition witnesses into a g realizing sigma."""
        g = group.identity_id
        for i, j in _adjacent_word(sigma):
            g = group.multiply(self.witnesses[(i, j)], g)
        return g


def _adjacent_pairs(k):
    return [(i, i + 1) for i in range(1, k)]


def _adjacent_word(sigma: PositionPerm) -> List[Tuple[int, int]]:
    """Adjacent transpositions whose product, applied left to right, is sigma."""
    current = list(range(len(sigma)))
    target = list(sigma)
    word = []
    # bubble sort positions: current[i] is the position now occupied by y_i
    for _ in range(len(sigma)):
        for pos in range(len(sigma) - 1):
            a = current.index(pos)
            b = current.index(pos + 1)
            if target[a] > target[b]:
                current[a], current[b] = pos + 1, pos
                word.append((pos + 1, pos + 2))
    return word


def _adjacent_transposition(i, k) -> PositionPerm:
    sigma = list(range(k))
    sigma[i - 1], sigma[i] = i, i - 1
    return tuple(sigma)


def realized_permutations(candidate: CandidateSet) -> Tuple[List[PositionPerm], TssCertificate]:
    """Image of Stab(Y) → S_k, scanned in element order with early exit at k!."""
    group, ys = candidate.group, list(candidate.member_ids)
    k = len(ys)
    full = math.factorial(k)
    position = np.full(group.order, -1, dtype=np.int64)
    position[ys] = np.arange(k)
    wanted = {_adjacent_transposition(i, k): (i, i + 1) for i in range(1, k)}

    image = set()
    witnesses: Dict[Tuple[int, int], int] = {}
    columns = [group.conjugation_images(y) for y in ys]
    for start in range(0, group.order, SCAN_CHUNK):
        stop = min(start + SCAN_CHUNK, group.order)
        block = position[np.stack([c[start:stop] for c in columns], axis=1)]
        hits = np.flatnonzero((block >= 0).all(axis=1))
        for offset in hits:
            sigma = tuple(int(v) for v in block[offset])
            if sigma not in image:
                image.add(sigma)
                pair = wanted.get(sigma)
                if pair is not None:
                    witnesses[pair] = start + int(offset)
        if len(image) == full:
            break
    return sorted(image), TssCertificate(witnesses=witnesses, realized_group_order=len(image))


def is_totally_symmetric(candidate: CandidateSet) -> Tuple[bool, Optional[TssCertificate]]:
    image, certificate = realized_permutations(candidate)
    if len(image) == math.factorial(candidate.size):
        return True, certificate
    return False, None


def unrealized_permutation(image: Sequence[PositionPerm], k: int) -> Optional[PositionPerm]:
    """First permutation of positions, in generation order, missing from the image."""
    realized = set(image)
    for sigma in itertools.permutations(range(k)):
        if sigma not in realized:
            return sigma
    return None


def is_commuting_tss(candidate: CandidateSet) -> bool:
    group, ys = candidate.group, candidate.member_ids
    return all(group.commute(a, b) for a, b in itertools.combinations(ys, 2))


def star_transpositions(n: int) -> List[Permutation]:
    """X_n = {(1 i) : i = 2..n}."""
    return [transposition(1, i, n) for i in range(2, n + 1)]


# --- G-sets ---


@dataclass
class FiniteAction:
    """A finite G-set: ``act(g, p)`` for element ids g and points p."""

    group: FiniteGroup = field(repr=False)
    points: Tuple[Hashable, ...]
    act: Callable[[int, Hashable], Hashable] = field(repr=False)
    label: str = "action"

    def __post_init__(self):
        self._point_set = set(self.points)

    def __contains__(self, point):
        return point in self._point_set

    def verify_axioms(self) -> bool:
        group = self.group
        if any(self.act(group.identity_id, p) != p for p in self.points):
            return False
        for g in range(group.order):
            for h in group.generators:
                h_id = group.id_of(h)
                gh = group.multiply(g, h_id)
                for p in self.points:
                    if self.act(g, self.act(h_id, p)) != self.act(gh, p):
                        return False
        return True


def conjugation_action(group: FiniteGroup) -> FiniteAction:
    return FiniteAction(
        group=group,
        points=tuple(range(group.order)),
        act=lambda g, p: int(group.conjugation_images(p)[g]),
        label=f"conjugation on {group.label}",
    )


def pulled_back_conjugation(acting: FiniteGroup, target: FiniteGroup, table) -> FiniteAction:
    """``acting`` acts on ``target`` by conjugation through the homomorphism ``table``."""
    values = [int(v) for v in table]
    return FiniteAction(
        group=acting,
        points=tuple(range(target.order)),
        act=lambda g, p: int(target.conjugation_images(p)[values[g]]),
        label=f"conjugation on {target.label} via {acting.label}",
    )


def natural_action(group: FiniteGroup) -> FiniteAction:
    return FiniteAction(
        group=group,
        points=tuple(range(1, group.degree + 1)),
        act=lambda g, p: group.elements[g](p),
        label=f"{group.label} on points",
    )


def subset_action(group: FiniteGroup, size: int) -> FiniteAction:
    """Action on the size-element subsets of the points."""
    points = tuple(frozenset(c) for c in itertools.combinations(range(1, group.degree + 1), size))
    return FiniteAction(
        group=group,
        points=points,
        act=lambda g, s: frozenset(group.elements[g](p) for p in s),
        label=f"{group.label} on {size}-subsets",
    )


def is_totally_symmetric_in_action(action: FiniteAction, ys: Sequence[Hashable]) -> bool:
    ys = list(ys)
    for y in ys:
        if y not in action:
            raise InvalidElementError(f"{y!r} is not a point of {action.label}")
    if len(set(ys)) != len(ys):
        raise InvalidElementError(f"Points must be distinct: {ys}")
    k = len(ys)
    full = math.factorial(k)
    position = {y: i for i, y in enumerate(ys)}
    image = set()
    for g in range(action.group.order):
        moved = [position.get(action.act(g, y)) for y in ys]
        if None in moved:
            continue
        image.add(tuple(moved))
        if len(image) == full:
            return True
    return len(image) == full


@dataclass
class CollapseReport:
    branch: str  # "collapse", "injective" or "partial"
    source_size: int
    image: Tuple[Hashable, ...]
    image_totally_symmetric: bool

    @property
    def holds(self):
        return self.branch != "partial" and self.image_totally_symmetric


def check_equivariance(source: FiniteAction, target: FiniteAction, f: Callable[[Hashable], Hashable]):
    if source.group is not target.group:
        raise InvalidElementError("Both actions must be actions of the same group")
    for g in range(source.group.order):
        for p in source.points:
            actual = f(source.act(g, p))
            expected = target.act(g, f(p))
            if actual != expected:
                raise EquivarianceError(source.group.notation(g), p, expected, actual)


def check_collapse(
    source: FiniteAction,
    target: FiniteAction,
    f: Callable[[Hashable], Hashable],
    ys,
    check_map: bool = True,
) -> CollapseReport:
    """Collision implies collapse: |f(Y)| ∈ {1, |Y|} and f(Y) stays totally symmetric.

    ``ys`` must be totally symmetric in ``source``. Pass ``check_map=False`` when
    ``f`` was already checked with ``check_equivariance``.
    """
    if check_map:
        check_equivariance(source, target, f)
    ys = list(ys)
    if not is_totally_symmetric_in_action(source, ys):
        raise InvalidElementError(f"{ys!r} is not totally symmetric in {source.label}")
    images = []
    for y in ys:
        v = f(y)
        if v not in images:
            images.append(v)
    if len(images) == 1:
        branch = "collapse"
    elif len(images) == len(ys):
        branch = "injective"
    else:
        branch = "partial"
    report = CollapseReport(
        branch=branch,
        source_size=len(ys),
        image=tuple(images),
        image_totally_symmetric=is_totally_symmetric_in_action(target, images),
    )
    if not report.holds:
        logger.warning(f"Collapse dichotomy fails on {source.label} → {target.label}: |f(Y)| = {len(images)}")
    return report
