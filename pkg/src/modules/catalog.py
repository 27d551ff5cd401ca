"""Built-in groups, group shorthands and group files.

Every group is realized as a permutation group: C_m on m points, D_m (order
2m) on m points, S_m and A_m naturally, Q8 by its left-regular action, and
direct products on the disjoint union of the factors' points.
"""

import logging
import math
import re
from pathlib import Path
from typing import List

from config import ENTRY_CAP, SYM_CAP
from modules.errors import CapExceededError, GroupFileError, PermutationParseError, UnknownGroupError
from modules.groups import FiniteGroup, close_generators, symmetric_group
from modules.permutation import Permutation, enumerate_sym, long_cycle, parse_perm

logger = logging.getLogger(__name__)

SHORTHAND_RE = re.compile(r"^(?P<kind>[SACD])(?P<n>\d+)$|^Q8$")

# Quaternion units as (sign, unit); products of units with their signs.
_QUATERNION_UNITS = ["1", "i", "j", "k"]
_QUATERNION_PRODUCTS = {
    ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
    ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
    ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
}


def cyclic_group(m: int) -> FiniteGroup:
    if m < 1:
        raise UnknownGroupError(f"C{m}: order must be positive")
    if m * m > ENTRY_CAP:
        raise CapExceededError(f"C{m}: {m} elements on {m} points exceed the entry cap {ENTRY_CAP}")
    gens = [long_cycle(m)] if m > 1 else []
    return close_generators(gens, f"C{m}", degree=m)


def dihedral_group(m: int) -> FiniteGroup:
    """Symmetries of the m-gon, order 2m."""
    if m < 3:
        raise UnknownGroupError(f"D{m}: need at least 3 vertices")
    if 2 * m * m > ENTRY_CAP:
        raise CapExceededError(f"D{m}: {2 * m} elements on {m} points exceed the entry cap {ENTRY_CAP}")
    reflection = Permutation(tuple((-i) % m for i in range(m)))
    return close_generators([long_cycle(m), reflection], f"D{m}")


def alternating_group(m: int) -> FiniteGroup:
    if m > SYM_CAP:
        raise UnknownGroupError(f"A{m}: degree exceeds the symmetric-group cap {SYM_CAP}")
    even = [p for p in enumerate_sym(m) if sum(len(c) - 1 for c in p.cycles()) % 2 == 0]
    gens = [Permutation.from_image_table(_three_cycle(m, i)) for i in range(3, m + 1)]
    return FiniteGroup(even, f"A{m}", generators=gens)


def _three_cycle(m, i):
    table = list(range(1, m + 1))
    table[0], table[1], table[i - 1] = 2, i, 1
    return table


def quaternion_group() -> FiniteGroup:
    elements = [(s, u) for s in (1, -1) for u in _QUATERNION_UNITS]
    position = {e: i for i, e in enumerate(elements)}

    def left_multiplication(unit):
        images = []
        for sign, u in elements:
            s, w = _QUATERNION_PRODUCTS[(unit, u)]
            images.append(position[(sign * s, w)])
        return Permutation(tuple(images))

    return close_generators([left_multiplication("i"), left_multiplication("j")], "Q8")


def direct_product(left: FiniteGroup, right: FiniteGroup) -> FiniteGroup:
    degree = left.degree + right.degree
    gens = [g.extend(degree) for g in left.generators]
    gens += [g.extend(degree, offset=left.degree) for g in right.generators]
    return close_generators(gens, f"{left.label}x{right.label}", degree=degree)


def _base_groups(max_order: int) -> List[FiniteGroup]:
    groups = [cyclic_group(m) for m in range(1, max_order + 1)]
    groups += [dihedral_group(m) for m in range(4, max_order // 2 + 1)]
    m = 3
    while m <= SYM_CAP and math.factorial(m) <= max_order:
        groups.append(symmetric_group(m))
        m += 1
    m = 4
    while m <= SYM_CAP and math.factorial(m) // 2 <= max_order:
        groups.append(alternating_group(m))
        m += 1
    if max_order >= 8:
        groups.append(quaternion_group())
    return groups


def catalog_groups(max_order: int) -> List[FiniteGroup]:
    """Deterministic, non-exhaustive list of groups of order ≤ max_order.

    Labels are unique: D3 = S3, D2, A3 = C3, S2 = C2 and friends are only
    listed under their first name.
    """
    base = _base_groups(max_order)
    factors = [g for g in base if g.order >= 2]
    products = []
    for i, left in enumerate(factors):
        for right in factors[i:]:
            if left.order * right.order <= max_order:
                products.append(direct_product(left, right))
    logger.info(f"Catalog up to order {max_order}: {len(base)} base groups, {len(products)} products")
    return base + products


def group_from_shorthand(text: str) -> FiniteGroup:
    """Resolve "S4", "A5", "C6", "D5", "Q8" and products such as "C2xS4"."""
    text = text.strip()
    if "x" in text:
        parts = text.split("x")
        group = group_from_shorthand(parts[0])
        for part in parts[1:]:
            group = direct_product(group, group_from_shorthand(part))
        return group
    match = SHORTHAND_RE.match(text)
    if not match:
        raise UnknownGroupError(f"Unknown group shorthand: {text!r} (use S<n>, A<n>, C<n>, D<n>, Q8 or --group-file)")
    if text == "Q8":
        return quaternion_group()
    kind, n = match.group("kind"), int(match.group("n"))
    if n < 1:
        raise UnknownGroupError(f"{text}: degree must be at least 1")
    if kind == "S":
        if n > SYM_CAP:
            raise UnknownGroupError(f"{text}: degree exceeds the symmetric-group cap {SYM_CAP}")
        return symmetric_group(n)
    if kind == "A":
        return alternating_group(n)
    if kind == "C":
        return cyclic_group(n)
    return dihedral_group(n)


def parse_group_text(text: str, label: str) -> FiniteGroup:
    """Group document: degree on the first line, one generator per line after it."""
    lines = [(no, line.split("#", 1)[0].strip()) for no, line in enumerate(text.splitlines(), start=1)]
    lines = [(no, line) for no, line in lines if line]
    if not lines:
        raise GroupFileError(f"{label}: empty group file")
    first_no, first = lines[0]
    if not first.isdigit() or int(first) < 1:
        raise GroupFileError(f"{label}: line {first_no}: expected a positive degree, got {first!r}")
    degree = int(first)
    gens = []
    for no, line in lines[1:]:
        try:
            gens.append(parse_perm(line, degree))
        except PermutationParseError as e:
            raise PermutationParseError(e.reason, line, position=e.position, line=no) from None
    return close_generators(gens, label, degree=degree)


def load_group_file(path) -> FiniteGroup:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise GroupFileError(f"Cannot read group file {path}: {e}") from None
    return parse_group_text(text, path.stem)
