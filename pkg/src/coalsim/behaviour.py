"""Behavioural equivalence: bounded-depth partitions, quotient witnesses,
and coupling-based relational witnesses.

Three independent computations are kept in agreement:

* the greatest bisimulation for a separating signature,
* the stabilized bounded-depth partition of the disjoint union of the two
  carriers (two states share a block at depth k+1 exactly when their
  transition values, relabeled by depth-k block ids, are equal), and
* an explicit quotient model on the blocks, whose projection maps are
  verified to commute with the transition structures.

`behavioural_equivalence` runs all three and raises `InternalCheckError` on
any disagreement, so a wrong answer can never be returned quietly.

Coupling search decides the span-style notion of bisimulation: a relation is
witnessed by giving, for every related pair, a single transition value over
the pairs whose two projections recover the related states' values.  Kripke
couplings have a canonical largest candidate; weighted kinds reduce to exact
transportation feasibility; neighborhood couplings are found by bounded
exhaustive search (the neighborhood functor admits no completeness claim).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import (
    BudgetError,
    InfiniteWeightError,
    InternalCheckError,
    KindMismatchError,
    QuotientUndefined,
)
from .liftings import LambdaSignature, ensure_separating
from .relations import Relation, difunctional_closure, relation
from .simulation import greatest_bisimulation
from .transport import feasible_transport
from .values import (
    DISTRIBUTION,
    INF,
    KRIPKE,
    MULTISET,
    NEIGHBORHOOD,
    Coalgebra,
    DistValue,
    EnumerationBudget,
    FunctorValue,
    KripkeValue,
    MultisetValue,
    NbhdValue,
    _skey,
    base,
    dist_value,
    enumerate_values,
    multiset_value,
    relabel,
    values_equal,
)

LEFT, RIGHT = "L", "R"

NBHD_COUPLING_CAP = 5


@dataclass(frozen=True)
class Partition:
    """Blocks over the tagged disjoint union of two carriers."""

    left: tuple
    right: tuple
    blocks: tuple  # tuple of tuples of (side, state), in first-occurrence order

    def block_of(self) -> dict:
        out = {}
        for i, blk in enumerate(self.blocks):
            for member in blk:
                out[member] = i
        return out

    def same_block(self, x, y) -> bool:
        ids = self.block_of()
        return ids[(LEFT, x)] == ids[(RIGHT, y)]

    def cross_relation(self) -> Relation:
        ids = self.block_of()
        pairs = frozenset(
            (x, y)
            for x in self.left
            for y in self.right
            if ids[(LEFT, x)] == ids[(RIGHT, y)]
        )
        return Relation(self.left, self.right, pairs)

    def to_dict(self) -> dict:
        return {
            "blocks": [
                {
                    "left": [s for side, s in blk if side == LEFT],
                    "right": [s for side, s in blk if side == RIGHT],
                }
                for blk in self.blocks
            ]
        }


def _tagged(c: Coalgebra, d: Coalgebra) -> list:
    return [(LEFT, x) for x in c.carrier] + [(RIGHT, y) for y in d.carrier]


def _transition_of(member, c, d):
    side, s = member
    return c.transition[s] if side == LEFT else d.transition[s]


def _group_blocks(order, key_of) -> tuple:
    """Group an ordered list by key, blocks numbered by first occurrence."""
    blocks = {}
    out = []
    for member in order:
        k = key_of(member)
        if k not in blocks:
            blocks[k] = len(out)
            out.append([])
        out[blocks[k]].append(member)
    return tuple(tuple(b) for b in out)


def _canonical_key(value: FunctorValue):
    if isinstance(value, NbhdValue):
        from .values import antichain

        return ("nbhd", antichain(value.minimals))
    return value


def _refine_once(c, d, blocks) -> tuple:
    ids = {}
    for i, blk in enumerate(blocks):
        for member in blk:
            ids[member] = i
    left_map = {x: ids[(LEFT, x)] for x in c.carrier}
    right_map = {y: ids[(RIGHT, y)] for y in d.carrier}

    def key_of(member):
        side, s = member
        f = left_map if side == LEFT else right_map
        return _canonical_key(relabel(_transition_of(member, c, d), f))

    return _group_blocks(_tagged(c, d), key_of)


def n_step_partition(c: Coalgebra, d: Coalgebra, n: int) -> Partition:
    """Depth-n observational partition of the disjoint union of two models.

    Depth 0 is a single block; each step groups states whose transition
    values agree after replacing every mentioned state by its previous-depth
    block id.  Relabeled-value equality matches equality of depth-n
    behaviours because all four functors preserve injections.
    """
    if c.kind != d.kind:
        raise KindMismatchError(
            f"cannot compare a {c.kind.name} model with a {d.kind.name} model"
        )
    blocks = (tuple(_tagged(c, d)),)
    for _ in range(n):
        blocks = _refine_once(c, d, blocks)
    return Partition(tuple(c.carrier), tuple(d.carrier), blocks)


def stabilized_partition(c: Coalgebra, d: Coalgebra) -> tuple:
    """Refine until stable; returns (partition, depth at stabilization).

    Blocks only ever split, so at most carrier-size many rounds happen.
    """
    if c.kind != d.kind:
        raise KindMismatchError(
            f"cannot compare a {c.kind.name} model with a {d.kind.name} model"
        )
    blocks = (tuple(_tagged(c, d)),)
    depth = 0
    for _ in range(len(c.carrier) + len(d.carrier) + 1):
        refined = _refine_once(c, d, blocks)
        if refined == blocks:
            return Partition(tuple(c.carrier), tuple(d.carrier), blocks), depth
        blocks = refined
        depth += 1
    raise InternalCheckError("partition failed to stabilize within the carrier bound")


@dataclass(frozen=True)
class QuotientWitness:
    """Explicit joint quotient model certifying behavioural equivalence."""

    blocks: tuple
    kappa_left: dict
    kappa_right: dict
    structure: dict  # block id -> value over block ids

    def to_dict(self) -> dict:
        from .modelio import value_to_json

        return {
            "blocks": [
                {
                    "left": [s for side, s in blk if side == LEFT],
                    "right": [s for side, s in blk if side == RIGHT],
                }
                for blk in self.blocks
            ],
            "kappa_left": {str(s): f"b{i}" for s, i in sorted(self.kappa_left.items())},
            "kappa_right": {str(s): f"b{i}" for s, i in sorted(self.kappa_right.items())},
            "structure": {
                f"b{i}": value_to_json(v, label=lambda b: f"b{b}")
                for i, v in sorted(self.structure.items())
            },
        }


def quotient_witness(s: Relation, c: Coalgebra, d: Coalgebra) -> QuotientWitness:
    """Quotient the disjoint union by the equivalence the relation generates.

    Succeeds when every member of each block has the same block-relabeled
    transition value; the common values then form a model on the blocks and
    both block maps are transition-preserving by construction (re-verified
    here).  Raises QuotientUndefined with the disagreeing pair of values
    otherwise, which certifies the relation does not witness behavioural
    equivalence.
    """
    if c.kind != d.kind:
        raise KindMismatchError(
            f"cannot compare a {c.kind.name} model with a {d.kind.name} model"
        )
    order = _tagged(c, d)
    parent = {m: m for m in order}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for x, y in s.pairs:
        union((LEFT, x), (RIGHT, y))
    blocks = _group_blocks(order, find)
    ids = {}
    for i, blk in enumerate(blocks):
        for member in blk:
            ids[member] = i
    kappa_left = {x: ids[(LEFT, x)] for x in c.carrier}
    kappa_right = {y: ids[(RIGHT, y)] for y in d.carrier}
    structure = {}
    for i, blk in enumerate(blocks):
        first = blk[0]
        fmap = kappa_left if first[0] == LEFT else kappa_right
        chosen = relabel(_transition_of(first, c, d), fmap)
        for member in blk[1:]:
            mmap = kappa_left if member[0] == LEFT else kappa_right
            candidate = relabel(_transition_of(member, c, d), mmap)
            if not values_equal(chosen, candidate):
                raise QuotientUndefined(blk, first, chosen, member, candidate)
        structure[i] = chosen
    for x in c.carrier:
        if not values_equal(relabel(c.transition[x], kappa_left), structure[kappa_left[x]]):
            raise InternalCheckError(f"left block map fails to commute at {x!r}")
    for y in d.carrier:
        if not values_equal(relabel(d.transition[y], kappa_right), structure[kappa_right[y]]):
            raise InternalCheckError(f"right block map fails to commute at {y!r}")
    return QuotientWitness(blocks, kappa_left, kappa_right, structure)


def behavioural_equivalence(
    c: Coalgebra, d: Coalgebra, sig: LambdaSignature
) -> Relation:
    """All behaviourally equivalent cross pairs, triple-checked.

    Computes the greatest bisimulation, requires it to equal the stabilized
    partition's cross relation, and requires the quotient construction on it
    to succeed.  Any disagreement raises InternalCheckError: the three
    routes provably coincide for separating signatures, so a mismatch is an
    implementation bug rather than an answer.
    """
    ensure_separating(sig, c, d)
    gb = greatest_bisimulation(c, d, sig)
    part, _ = stabilized_partition(c, d)
    if part.cross_relation().pairs != gb.pairs:
        raise InternalCheckError(
            "greatest bisimulation disagrees with the stabilized partition"
        )
    try:
        quotient_witness(gb, c, d)
    except QuotientUndefined as exc:
        raise InternalCheckError(f"quotient construction failed: {exc}") from exc
    return gb


@dataclass(frozen=True)
class Coupling:
    """Per-pair transition values over related pairs witnessing a relational span."""

    values: tuple  # tuple of ((x, y), FunctorValue over pair states)

    def value_for(self, pair):
        for p, v in self.values:
            if p == pair:
                return v
        raise KeyError(pair)

    def to_dict(self) -> dict:
        from .modelio import value_to_json

        return {
            "couplings": [
                {
                    "left": p[0],
                    "right": p[1],
                    "value": value_to_json(v, label=list),
                }
                for p, v in self.values
            ]
        }


def verify_coupling(
    coupling: Coupling, s: Relation, c: Coalgebra, d: Coalgebra
) -> bool:
    """Do both projections of every coupling value recover the endpoint values?"""
    carried = {p for p, _ in coupling.values}
    if carried != set(s.pairs):
        return False
    p1 = {}
    p2 = {}
    for p, v in coupling.values:
        for q in base(v):
            p1[q] = q[0]
            p2[q] = q[1]
    for (x, y), v in coupling.values:
        if not values_equal(relabel(v, p1), c.transition[x]):
            return False
        if not values_equal(relabel(v, p2), d.transition[y]):
            return False
    return True


def _kripke_coupling(x, y, c, d, cells) -> Optional[FunctorValue]:
    t, u = c.transition[x], d.transition[y]
    if t.props != u.props:
        return None
    chosen = frozenset(
        (a, b) for a, b in cells if a in t.succ and b in u.succ
    )
    if frozenset(a for a, _ in chosen) != t.succ:
        return None
    if frozenset(b for _, b in chosen) != u.succ:
        return None
    return KripkeValue(t.props, chosen)


def _weighted_coupling(x, y, c, d, cells) -> Optional[FunctorValue]:
    t, u = c.transition[x], d.transition[y]
    rows = dict(t.entries)
    cols = dict(u.entries)
    if isinstance(t, MultisetValue):
        if INF in rows.values() or INF in cols.values():
            raise InfiniteWeightError(
                f"coupling search needs finite weights; pair ({x!r}, {y!r}) has an "
                f"infinite weight"
            )
    plan = feasible_transport(rows, cols, cells)
    if plan is None:
        return None
    if isinstance(t, DistValue):
        return dist_value(plan)
    return multiset_value({cell: int(q) for cell, q in plan.items()})


def _nbhd_coupling(x, y, c, d, pair_states) -> Optional[FunctorValue]:
    if len(pair_states) > NBHD_COUPLING_CAP:
        raise BudgetError(
            f"neighborhood coupling search over {len(pair_states)} pairs exceeds "
            f"the cap of {NBHD_COUPLING_CAP}"
        )
    t, u = c.transition[x], d.transition[y]
    p1 = {q: q[0] for q in pair_states}
    p2 = {q: q[1] for q in pair_states}
    budget = EnumerationBudget(max_neighborhood_states=NBHD_COUPLING_CAP)
    for v in enumerate_values(c.kind, sorted(pair_states, key=_skey), budget):
        if values_equal(relabel(v, p1), t) and values_equal(relabel(v, p2), u):
            return v
    return None


def _coupling_for_pairs(s_pairs, cell_pairs, c, d) -> Optional[Coupling]:
    kind = c.kind.name
    cells = sorted(cell_pairs, key=_skey)
    out = []
    for x, y in sorted(s_pairs, key=_skey):
        if kind == KRIPKE:
            v = _kripke_coupling(x, y, c, d, cells)
        elif kind in (MULTISET, DISTRIBUTION):
            v = _weighted_coupling(x, y, c, d, cells)
        elif kind == NEIGHBORHOOD:
            v = _nbhd_coupling(x, y, c, d, cells)
        else:
            raise KindMismatchError(f"unknown kind {kind!r}")
        if v is None:
            return None
        out.append(((x, y), v))
    return Coupling(tuple(out))


def t_bisimulation_check(
    s: Relation, c: Coalgebra, d: Coalgebra
) -> Optional[Coupling]:
    """Find per-pair coupling values over the relation itself, or None.

    Kripke uses the largest candidate (its projections can only shrink by
    dropping pairs, so if the largest fails, all do); weighted kinds use
    exact transportation; neighborhood search is exhaustive within its
    budget and claims no completeness.
    """
    if c.kind != d.kind:
        raise KindMismatchError(
            f"cannot relate a {c.kind.name} model with a {d.kind.name} model"
        )
    coupling = _coupling_for_pairs(s.pairs, s.pairs, c, d)
    if coupling is not None and not verify_coupling(coupling, s, c, d):
        raise InternalCheckError("constructed coupling fails its projection equations")
    return coupling


def t_bisim_up_to_difunctionality_check(
    s: Relation, c: Coalgebra, d: Coalgebra
) -> Optional[Coupling]:
    """Coupling search with values over the difunctional closure of the relation."""
    if c.kind != d.kind:
        raise KindMismatchError(
            f"cannot relate a {c.kind.name} model with a {d.kind.name} model"
        )
    closure = difunctional_closure(s)
    coupling = _coupling_for_pairs(s.pairs, closure.pairs, c, d)
    if coupling is not None and not verify_coupling(coupling, s, c, d):
        raise InternalCheckError("constructed coupling fails its projection equations")
    return coupling
