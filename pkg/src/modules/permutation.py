"""Exact permutation arithmetic on {1..n}.

Points are 1-based in every piece of text this module reads or writes;
``Permutation.images`` stores the 0-based image table. Products apply
right to left: ``compose(p, q)`` maps i to p(q(i)).
"""

import itertools
import logging
import math
import re
from dataclasses import dataclass
from typing import List, Tuple

from config import SYM_CAP
from modules.errors import CapExceededError, DegreeMismatchError, PermutationParseError

logger = logging.getLogger(__name__)

_IMAGE_ARRAY_RE = re.compile(r"^\[\s*\d+(\s*,\s*\d+)*\s*\]$")
_POINT_RE = re.compile(r"\d+")


@dataclass(frozen=True, order=True)
class Permutation:
    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"Not a bijection of 0..{len(self.images) - 1}: {self.images}")

    @classmethod
    def identity(cls, degree):
        return cls(tuple(range(degree)))

    @classmethod
    def from_image_table(cls, table):
        """Build from a 1-based image table such as [2, 1, 4, 3]."""
        return cls(tuple(v - 1 for v in table))

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, point):
        return self.images[point - 1] + 1

    def __mul__(self, other):
        return compose(self, other)

    def __str__(self):
        return format_perm(self)

    def image_table(self):
        return [v + 1 for v in self.images]

    def is_identity(self):
        return all(i == v for i, v in enumerate(self.images))

    def inverse(self):
        inv = [0] * len(self.images)
        for i, v in enumerate(self.images):
            inv[v] = i
        return Permutation(tuple(inv))

    def cycles(self):
        """Nontrivial cycles as 1-based tuples, each starting at its smallest point."""
        seen = set()
        result = []
        for start in range(len(self.images)):
            if start in seen or self.images[start] == start:
                continue
            cycle = []
            point = start
            while point not in seen:
                seen.add(point)
                cycle.append(point + 1)
                point = self.images[point]
            result.append(tuple(cycle))
        return result

    def support(self):
        return frozenset(i + 1 for i, v in enumerate(self.images) if i != v)

    def order(self):
        lengths = [len(c) for c in self.cycles()]
        return math.lcm(*lengths) if lengths else 1

    def fixes(self, point):
        return self.images[point - 1] == point - 1

    def extend(self, degree, offset=0):
        """Embed into S_degree acting on points offset+1..offset+n, fixing the rest."""
        images = list(range(degree))
        for i, v in enumerate(self.images):
            images[i + offset] = v + offset
        return Permutation(tuple(images))


@dataclass(frozen=True, order=True)
class CycleType:
    parts: Tuple[int, ...]
    degree: int

    def __str__(self):
        return "[" + ",".join(str(p) for p in self.parts) + "]"


def _check_degrees(p, q):
    if p.degree != q.degree:
        raise DegreeMismatchError(p.degree, q.degree)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """p∘q: apply q first, then p."""
    _check_degrees(p, q)
    return Permutation(tuple(p.images[i] for i in q.images))


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def conjugate(g: Permutation, x: Permutation) -> Permutation:
    """g·x·g⁻¹, i.e. x with its points relabelled by g."""
    _check_degrees(g, x)
    images = [0] * x.degree
    for i, v in enumerate(x.images):
        images[g.images[i]] = g.images[v]
    return Permutation(tuple(images))


def power(p: Permutation, exponent: int) -> Permutation:
    result = Permutation.identity(p.degree)
    base = p if exponent >= 0 else p.inverse()
    for _ in range(abs(exponent)):
        result = compose(base, result)
    return result


def cycle_type(x: Permutation) -> CycleType:
    parts = sorted((len(c) for c in x.cycles()), reverse=True)
    return CycleType(tuple(parts), x.degree)


def transposition(i, j, degree):
    images = list(range(degree))
    images[i - 1], images[j - 1] = j - 1, i - 1
    return Permutation(tuple(images))


def long_cycle(degree):
    """(1 2 … n)."""
    return Permutation(tuple((i + 1) % degree for i in range(degree)))


def format_perm(p: Permutation) -> str:
    cycles = p.cycles()
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(v) for v in c) + ")" for c in cycles)


def parse_perm(text: str, degree: int) -> Permutation:
    """Parse cycle notation ("(1 2)(3 4)", "e", "()") or an image array ("[2,1,4,3]")."""
    stripped = text.strip()
    if stripped in ("e", "()", ""):
        return Permutation.identity(degree)

    if stripped.startswith("["):
        if not _IMAGE_ARRAY_RE.match(stripped):
            raise PermutationParseError("Malformed image array", text, position=text.find("["))
        values = [int(v) for v in _POINT_RE.findall(stripped)]
        if len(values) != degree:
            raise PermutationParseError(f"Image array must have {degree} entries", text)
        if sorted(values) != list(range(1, degree + 1)):
            raise PermutationParseError("Image array is not a bijection", text)
        return Permutation.from_image_table(values)

    images = list(range(degree))
    used = set()
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace() or ch == "*":
            pos += 1
            continue
        if ch != "(":
            raise PermutationParseError("Expected '('", text, position=pos)
        close = text.find(")", pos + 1)
        nested = text.find("(", pos + 1)
        if close == -1 or (nested != -1 and nested < close):
            raise PermutationParseError("Unbalanced parenthesis", text, position=pos)
        body = text[pos + 1:close]
        points = []
        offset = pos + 1
        for match in re.finditer(r"[^\s,]+", body):
            token = match.group(0)
            token_pos = offset + match.start()
            if not token.isdigit():
                raise PermutationParseError(f"Not a point: {token}", text, position=token_pos)
            point = int(token)
            if point < 1 or point > degree:
                raise PermutationParseError(f"Point {point} outside 1..{degree}", text, position=token_pos)
            if point in used:
                raise PermutationParseError(f"Point {point} repeated", text, position=token_pos)
            used.add(point)
            points.append(point)
        for a, b in zip(points, points[1:] + points[:1]):
            images[a - 1] = b - 1
        pos = close + 1
    return Permutation(tuple(images))


def enumerate_sym(n: int, cap: int = None) -> List[Permutation]:
    """All n! permutations of degree n in lexicographic image-table order."""
    cap = SYM_CAP if cap is None else cap
    if n < 1:
        raise ValueError("Degree must be positive")
    if n > cap:
        raise CapExceededError(f"S_{n} exceeds the enumeration cap S_{cap}")
    logger.debug(f"Enumerating S_{n} ({math.factorial(n)} elements)")
    return [Permutation(images) for images in itertools.permutations(range(n))]
