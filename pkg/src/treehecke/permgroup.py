"""Finite permutation groups given by generators, at desk-scale degrees.

Permutations are tuples of 1-based images: ``p[i - 1]`` is the image of ``i``.
Products compose right to left, ``compose(p, q)(i) == p(q(i))``.
The whole group is enumerated by breadth-first closure; no stabilizer chains.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import GroupTooLarge, InvalidPermutation, NotTransitive
from .unionfind import UnionFind

Perm = tuple[int, ...]

DEFAULT_GROUP_BOUND = 10**6


def identity(d: int) -> Perm:
    return tuple(range(1, d + 1))


def compose(p: Perm, q: Perm) -> Perm:
    """``p o q``: apply ``q`` first."""
    return tuple(p[i - 1] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, image in enumerate(p, start=1):
        out[image - 1] = i
    return tuple(out)


def apply(p: Perm, i: int) -> int:
    return p[i - 1]


def check_perm(p: Sequence[int], d: int) -> Perm:
    p = tuple(int(x) for x in p)
    if len(p) != d or sorted(p) != list(range(1, d + 1)):
        raise InvalidPermutation(f"{list(p)} is not a permutation of 1..{d}")
    return p


def from_cycles(cycles: Iterable[Sequence[int]], d: int) -> Perm:
    images = list(range(1, d + 1))
    seen: set[int] = set()
    for cyc in cycles:
        for a in cyc:
            if not 1 <= a <= d:
                raise InvalidPermutation(f"point {a} outside 1..{d}")
            if a in seen:
                raise InvalidPermutation(f"point {a} repeated in cycle notation")
            seen.add(a)
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]] if cyc else []):
            images[a - 1] = b
    return tuple(images)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_perm(text: str, d: int) -> Perm:
    """Parse ``"2,3,4,5,1"`` (images) or ``"(1 2 3)(4 5)"`` (cycles); ``"()"`` is the identity."""
    text = text.strip()
    if not text:
        raise InvalidPermutation("empty permutation")
    if text.startswith("("):
        if _CYCLE_RE.sub("", text).strip():
            raise InvalidPermutation(f"cannot parse cycle notation {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(text):
            pts = [tok for tok in re.split(r"[\s,]+", body.strip()) if tok]
            try:
                cycles.append([int(tok) for tok in pts])
            except ValueError:
                raise InvalidPermutation(f"non-integer point in {text!r}") from None
        return from_cycles(cycles, d)
    try:
        images = [int(tok) for tok in re.split(r"[\s,]+", text) if tok]
    except ValueError:
        raise InvalidPermutation(f"cannot parse permutation {text!r}") from None
    return check_perm(images, d)


def parse_generators(text: str, d: int) -> list[Perm]:
    """Parse a generator list.

    Generators are separated by ``;``, or, in cycle notation, by commas outside
    parentheses: ``"(1 2 3 4 5),(2 5)(3 4)"``.
    """
    chunks = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if not part.startswith("("):
            chunks.append(part)
            continue
        depth = 0
        buf = []
        for ch in part:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch == "," and depth == 0:
                chunks.append("".join(buf))
                buf = []
            else:
                buf.append(ch)
        if depth != 0:
            raise InvalidPermutation(f"unbalanced parentheses in {part!r}")
        chunks.append("".join(buf))
    if not chunks:
        raise InvalidPermutation("no generators given")
    return [parse_perm(c, d) for c in chunks]


def cycle_string(p: Perm) -> str:
    seen = set()
    parts = []
    for start in range(1, len(p) + 1):
        if start in seen or p[start - 1] == start:
            continue
        cyc = []
        x = start
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = p[x - 1]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


@dataclass(frozen=True)
class PermGroup:
    degree: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def element_set(self) -> frozenset[Perm]:
        return frozenset(self.elements)

    def __contains__(self, p: Perm) -> bool:
        return p in self.element_set

    def stabilizer(self, point: int) -> list[Perm]:
        return [g for g in self.elements if g[point - 1] == point]

    def orbit(self, point: int) -> list[int]:
        return sorted({g[point - 1] for g in self.elements})

    def is_transitive(self) -> bool:
        return self.degree == 0 or len(self.orbit(1)) == self.degree


def closure(d: int, generators: Sequence[Sequence[int]], bound: int = DEFAULT_GROUP_BOUND) -> PermGroup:
    """Enumerate the group generated by ``generators`` breadth first."""
    gens = tuple(check_perm(g, d) for g in generators)
    e = identity(d)
    seen = {e}
    order = [e]
    queue = deque([e])
    while queue:
        h = queue.popleft()
        for g in gens:
            x = compose(g, h)
            if x not in seen:
                seen.add(x)
                order.append(x)
                if len(order) > bound:
                    raise GroupTooLarge(f"group order exceeds bound {bound}")
                queue.append(x)
    return PermGroup(d, gens, tuple(order))


def orbits_of(elements: Iterable[Perm], points: Iterable[int]) -> list[list[int]]:
    """Orbits of a set of permutations on a subset of points, each sorted."""
    uf = UnionFind(points)
    pts = list(uf.parent)
    for g in elements:
        for x in pts:
            y = g[x - 1]
            if y in uf.parent:
                uf.union(x, y)
    return sorted((sorted(c) for c in uf.groups()), key=lambda c: c[0])


def minimal_block(group: PermGroup, a: int, b: int) -> list[int]:
    """Smallest block of imprimitivity containing ``a`` and ``b``."""
    uf = UnionFind(range(1, group.degree + 1))
    uf.union(a, b)
    pending = [(a, b)]
    while pending:
        x, y = pending.pop()
        for g in group.generators:
            gx, gy = g[x - 1], g[y - 1]
            if uf.union(gx, gy):
                pending.append((gx, gy))
    root = uf.find(a)
    return [i for i in range(1, group.degree + 1) if uf.find(i) == root]


def is_primitive(group: PermGroup) -> bool:
    if not group.is_transitive():
        return False
    d = group.degree
    return all(len(minimal_block(group, 1, b)) == d for b in range(2, d + 1))


@dataclass(frozen=True)
class GroupAnalysis:
    order: int
    transitive: bool
    primitive: bool
    two_transitive: bool


def analyze(group: PermGroup) -> GroupAnalysis:
    transitive = group.is_transitive()
    primitive = is_primitive(group)
    two_transitive = transitive and suborbit_table(group).k == 1
    return GroupAnalysis(group.order, transitive, primitive, two_transitive)


@dataclass(frozen=True)
class SuborbitTable:
    """Canonical suborbit data of a transitive group.

    ``suborbits[j - 1]`` is the stabilizer-of-1 orbit carrying label ``j``;
    ``labels[c - 1][e - 1]`` is the label of exit colour ``e`` seen from entry
    colour ``c`` (0 when ``e == c``); ``transversals[c - 1]`` maps 1 to ``c``.
    """

    group: PermGroup = field(repr=False)
    k: int
    sizes: tuple[int, ...]
    suborbits: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[int, ...], ...]
    transversals: tuple[Perm, ...] = field(repr=False)

    @property
    def degree(self) -> int:
        return self.group.degree

    def label(self, entry: int, exit: int) -> int:
        return self.labels[entry - 1][exit - 1]

    def exits(self, entry: int, label: int) -> list[int]:
        """Exit colours carrying ``label`` at ``entry``, ascending."""
        row = self.labels[entry - 1]
        return [e for e in range(1, len(row) + 1) if row[e - 1] == label]


def schreier_transversal(group: PermGroup, base: int = 1) -> dict[int, Perm]:
    """Breadth-first Schreier tree over the generators, in input order."""
    d = group.degree
    tau = {base: identity(d)}
    queue = deque([base])
    while queue:
        x = queue.popleft()
        for g in group.generators:
            y = g[x - 1]
            if y not in tau:
                tau[y] = compose(g, tau[x])
                queue.append(y)
    return tau


def labeling_from(sub: Sequence[Sequence[int]], tau: Perm) -> tuple[int, ...]:
    """Exit labels at colour ``tau(1)`` transported from the suborbits at 1."""
    d = len(tau)
    where = {}
    for j, orb in enumerate(sub, start=1):
        for x in orb:
            where[x] = j
    tau_inv = inverse(tau)
    c = tau[0]
    return tuple(0 if e == c else where[tau_inv[e - 1]] for e in range(1, d + 1))


def suborbit_table(group: PermGroup) -> SuborbitTable:
    if not group.is_transitive():
        raise NotTransitive("suborbit table needs a transitive group")
    d = group.degree
    stab = group.stabilizer(1)
    subs = orbits_of(stab, range(2, d + 1))
    subs.sort(key=lambda o: (len(o), o[0]))
    tau = schreier_transversal(group)
    transversals = tuple(tau[c] for c in range(1, d + 1))
    labels = tuple(labeling_from(subs, t) for t in transversals)
    return SuborbitTable(
        group=group,
        k=len(subs),
        sizes=tuple(len(o) for o in subs),
        suborbits=tuple(tuple(o) for o in subs),
        labels=labels,
        transversals=transversals,
    )


def label_consistency_check(table: SuborbitTable) -> bool:
    """True iff every ``tau`` with ``tau(1) = c`` induces the table's labels at ``c``."""
    for tau in table.group.elements:
        if labeling_from(table.suborbits, tau) != table.labels[tau[0] - 1]:
            return False
    return True


# A few named groups, used by the CLI and the tests.

def cyclic_generators(d: int) -> list[Perm]:
    return [tuple(list(range(2, d + 1)) + [1])]


def dihedral_generators(d: int) -> list[Perm]:
    reflection = tuple([1] + [d + 2 - i for i in range(2, d + 1)])
    return cyclic_generators(d) + [reflection]


def symmetric_generators(d: int) -> list[Perm]:
    if d == 1:
        return [identity(1)]
    swap = tuple([2, 1] + list(range(3, d + 1)))
    return [swap] + cyclic_generators(d)


def alternating_generators(d: int) -> list[Perm]:
    # 3-cycles (1 2 i) generate A_d
    return [from_cycles([[1, 2, i]], d) for i in range(3, d + 1)]
