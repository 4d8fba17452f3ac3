"""Finite relations between two state carriers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import ValidationError
from .values import _skey


@dataclass(frozen=True)
class Relation:
    left: tuple
    right: tuple
    pairs: frozenset

    def image(self, states) -> frozenset:
        a = set(states)
        return frozenset(y for x, y in self.pairs if x in a)

    def preimage(self, states) -> frozenset:
        b = set(states)
        return frozenset(x for x, y in self.pairs if y in b)

    def converse(self) -> "Relation":
        return Relation(self.right, self.left, frozenset((y, x) for x, y in self.pairs))

    def compose(self, other: "Relation") -> "Relation":
        if self.right != other.left:
            raise ValidationError("composition needs matching middle carriers")
        by_mid = {}
        for x, y in self.pairs:
            by_mid.setdefault(y, []).append(x)
        out = set()
        for y, z in other.pairs:
            for x in by_mid.get(y, ()):
                out.add((x, z))
        return Relation(self.left, other.right, frozenset(out))

    def union(self, other: "Relation") -> "Relation":
        if self.left != other.left or self.right != other.right:
            raise ValidationError("union needs identical carriers")
        return Relation(self.left, self.right, self.pairs | other.pairs)

    def is_difunctional(self) -> bool:
        return all(
            (x, w) in self.pairs
            for x, y in self.pairs
            for z, y2 in self.pairs
            if y2 == y
            for z2, w in self.pairs
            if z2 == z
        )

    def sorted_pairs(self) -> list:
        li = {s: i for i, s in enumerate(self.left)}
        ri = {s: i for i, s in enumerate(self.right)}
        return sorted(self.pairs, key=lambda p: (li[p[0]], ri[p[1]]))

    def left_images(self) -> dict:
        out = {x: set() for x in self.left}
        for x, y in self.pairs:
            out[x].add(y)
        return {x: frozenset(ys) for x, ys in out.items()}

    def __len__(self):
        return len(self.pairs)


def relation(left: Iterable, right: Iterable, pairs: Iterable) -> Relation:
    left = tuple(left)
    right = tuple(right)
    ls, rs = set(left), set(right)
    pairs = frozenset(tuple(p) for p in pairs)
    bad = sorted((p for p in pairs if p[0] not in ls or p[1] not in rs), key=_skey)
    if bad:
        raise ValidationError(f"pairs outside the carriers: {bad}")
    return Relation(left, right, pairs)


def full_relation(left: Iterable, right: Iterable) -> Relation:
    left = tuple(left)
    right = tuple(right)
    return Relation(left, right, frozenset((x, y) for x in left for y in right))


def identity_relation(carrier: Iterable) -> Relation:
    carrier = tuple(carrier)
    return Relation(carrier, carrier, frozenset((x, x) for x in carrier))


def difunctional_closure(s: Relation) -> Relation:
    """Least difunctional relation containing s.

    Iterates adding every pair reachable through a zig-zag x S y, z S y,
    z S w until nothing changes; equivalently the relation induced by the
    connected components of the bipartite graph of s.
    """
    pairs = set(s.pairs)
    while True:
        by_right = {}
        by_left = {}
        for x, y in pairs:
            by_right.setdefault(y, set()).add(x)
            by_left.setdefault(x, set()).add(y)
        added = set()
        for x, y in pairs:
            for z in by_right[y]:
                for w in by_left[z]:
                    if (x, w) not in pairs:
                        added.add((x, w))
        if not added:
            return Relation(s.left, s.right, frozenset(pairs))
        pairs |= added
