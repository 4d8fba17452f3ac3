"""Transition structures for the four supported functor kinds.

A state of a model is mapped to one *transition value*: a Kripke pair
(propositions, successor set), a finitely supported multiset of states with
weights in the naturals extended by infinity, a finitely supported exact
rational probability distribution, or a monotone neighborhood system stored
as the antichain of its minimal sets.  All values are immutable and
hash-canonical, except that neighborhood values keep the minimal sets they
were built from; `values_equal` compares the denoted upward-closed families.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .errors import BudgetError, KindMismatchError, ValidationError

INF = float("inf")

KRIPKE = "kripke"
MULTISET = "multiset"
DISTRIBUTION = "distribution"
NEIGHBORHOOD = "neighborhood"

_KIND_NAMES = (KRIPKE, MULTISET, DISTRIBUTION, NEIGHBORHOOD)


def _skey(x):
    # Deterministic sort key for state labels of any hashable type
    # (strings, ints, pairs); independent of PYTHONHASHSEED.
    return repr(x)


@dataclass(frozen=True)
class FunctorKind:
    """One of the four supported functors; Kripke carries its atom vocabulary."""

    name: str
    atoms: tuple[str, ...] = ()

    def __post_init__(self):
        if self.name not in _KIND_NAMES:
            raise ValidationError(f"unknown functor kind {self.name!r}")
        if self.atoms and self.name != KRIPKE:
            raise ValidationError(f"functor kind {self.name!r} carries no atom vocabulary")


def kripke_kind(atoms: Iterable[str] = ()) -> FunctorKind:
    return FunctorKind(KRIPKE, tuple(atoms))


MULTISET_KIND = FunctorKind(MULTISET)
DISTRIBUTION_KIND = FunctorKind(DISTRIBUTION)
NEIGHBORHOOD_KIND = FunctorKind(NEIGHBORHOOD)


@dataclass(frozen=True)
class KripkeValue:
    props: frozenset
    succ: frozenset


@dataclass(frozen=True)
class MultisetValue:
    """Finite-support weight map; entries are (state, weight) sorted, no zeros."""

    entries: tuple

    @property
    def weights(self) -> dict:
        return dict(self.entries)

    def weight(self, state):
        for s, w in self.entries:
            if s == state:
                return w
        return 0


@dataclass(frozen=True)
class DistValue:
    """Finite-support probability mass map; entries are (state, Fraction) sorted."""

    entries: tuple

    @property
    def mass(self) -> dict:
        return dict(self.entries)


@dataclass(frozen=True)
class NbhdValue:
    """Upward-closed family of state sets, stored by its claimed minimal sets."""

    minimals: frozenset

    def contains(self, states) -> bool:
        a = frozenset(states)
        return any(m <= a for m in self.minimals)


FunctorValue = KripkeValue | MultisetValue | DistValue | NbhdValue


def kripke_value(props: Iterable = (), succ: Iterable = ()) -> KripkeValue:
    return KripkeValue(frozenset(props), frozenset(succ))


def multiset_value(weights: Mapping) -> MultisetValue:
    cleaned = {}
    for s, w in weights.items():
        if w == INF:
            cleaned[s] = INF
            continue
        if not isinstance(w, int) or isinstance(w, bool):
            raise ValidationError(f"multiset weight for {s!r} must be a natural number or infinity, got {w!r}")
        if w < 0:
            raise ValidationError(f"multiset weight for {s!r} is negative")
        if w > 0:
            cleaned[s] = w
    return MultisetValue(tuple(sorted(cleaned.items(), key=lambda kv: _skey(kv[0]))))


def dist_value(mass: Mapping) -> DistValue:
    cleaned = {}
    for s, q in mass.items():
        q = Fraction(q)
        if q < 0:
            raise ValidationError(f"distribution mass for {s!r} is negative")
        if q > 0:
            cleaned[s] = q
    return DistValue(tuple(sorted(cleaned.items(), key=lambda kv: _skey(kv[0]))))


def nbhd_value(minimals: Iterable[Iterable]) -> NbhdValue:
    return NbhdValue(frozenset(frozenset(m) for m in minimals))


def antichain(sets: Iterable[Iterable]) -> frozenset:
    """Minimal elements of a family of sets; canonical form of a neighborhood value."""
    family = {frozenset(s) for s in sets}
    return frozenset(s for s in family if not any(t < s for t in family))


@dataclass(frozen=True)
class Coalgebra:
    """Finite carrier with a total transition map into values of one kind.

    The carrier keeps its given order; every listed output is reported in
    carrier order, which makes results reproducible byte for byte.
    """

    kind: FunctorKind
    carrier: tuple
    transition: Mapping

    def index(self, state) -> int:
        return self.carrier.index(state)


def coalgebra(kind: FunctorKind, carrier: Iterable, transition: Mapping) -> Coalgebra:
    c = Coalgebra(kind, tuple(carrier), dict(transition))
    validate(c)
    return c


def _value_kind_name(value: FunctorValue) -> str:
    if isinstance(value, KripkeValue):
        return KRIPKE
    if isinstance(value, MultisetValue):
        return MULTISET
    if isinstance(value, DistValue):
        return DISTRIBUTION
    if isinstance(value, NbhdValue):
        return NEIGHBORHOOD
    raise KindMismatchError(f"not a transition value: {value!r}")


def validate(c: Coalgebra) -> None:
    """Check every structural invariant of a model; raise a full report on failure."""
    problems = []
    if not c.carrier:
        problems.append("carrier is empty")
    seen = set()
    for s in c.carrier:
        if s in seen:
            problems.append(f"duplicate carrier state {s!r}")
        seen.add(s)
    carrier = frozenset(c.carrier)
    missing = [s for s in c.carrier if s not in c.transition]
    for s in missing:
        problems.append(f"state {s!r} has no transition value")
    for s in c.transition:
        if s not in carrier:
            problems.append(f"transition defined on {s!r}, which is not in the carrier")
    for s in c.carrier:
        t = c.transition.get(s)
        if t is None:
            continue
        try:
            vk = _value_kind_name(t)
        except KindMismatchError:
            problems.append(f"state {s!r}: transition value has unknown type {type(t).__name__}")
            continue
        if vk != c.kind.name:
            problems.append(f"state {s!r}: value kind {vk} does not match model kind {c.kind.name}")
            continue
        stray = [z for z in sorted(base(t), key=_skey) if z not in carrier]
        if stray:
            problems.append(f"state {s!r}: mentions states outside the carrier: {stray}")
        if isinstance(t, KripkeValue):
            bad = sorted(t.props - set(c.kind.atoms))
            if bad:
                problems.append(f"state {s!r}: unknown atoms {bad}")
        elif isinstance(t, MultisetValue):
            for z, w in t.entries:
                if w == INF:
                    continue
                if not isinstance(w, int) or isinstance(w, bool) or w < 0:
                    problems.append(f"state {s!r}: weight {w!r} for {z!r} is not a natural or infinity")
                elif w == 0:
                    problems.append(f"state {s!r}: stores an explicit zero weight for {z!r}")
        elif isinstance(t, DistValue):
            total = Fraction(0)
            for z, q in t.entries:
                if not isinstance(q, Fraction) or q <= 0:
                    problems.append(f"state {s!r}: mass {q!r} for {z!r} is not a positive rational")
                else:
                    total += q
            if total != 1:
                problems.append(f"state {s!r}: mass sum {total} != 1")
        elif isinstance(t, NbhdValue):
            if t.minimals != antichain(t.minimals):
                problems.append(f"state {s!r}: minimal sets are not an antichain")
    if problems:
        raise ValidationError(problems)


def base(t: FunctorValue) -> frozenset:
    """States a value can observe: successors, support, or union of minimals.

    Satisfaction of any supported modality depends only on the part of the
    tested set that meets this base, which is what makes all subset
    quantifications in this package finite.
    """
    if isinstance(t, KripkeValue):
        return t.succ
    if isinstance(t, MultisetValue):
        return frozenset(s for s, _ in t.entries)
    if isinstance(t, DistValue):
        return frozenset(s for s, _ in t.entries)
    if isinstance(t, NbhdValue):
        out = set()
        for m in t.minimals:
            out |= m
        return frozenset(out)
    raise KindMismatchError(f"not a transition value: {t!r}")


def relabel(t: FunctorValue, f: Mapping) -> FunctorValue:
    """Push a value forward along a total state map (the functorial action).

    Kripke successors take the image, weights and masses are summed over
    fibers (infinity absorbs), and a neighborhood family maps to the family
    whose members are exactly the sets with preimage in the original; its
    antichain is the minimized family of images of the original minimals.
    """
    mentioned = base(t)
    missing = [s for s in sorted(mentioned, key=_skey) if s not in f]
    if missing:
        raise ValidationError(f"relabel map is not defined on {missing}")
    if isinstance(t, KripkeValue):
        return KripkeValue(t.props, frozenset(f[s] for s in t.succ))
    if isinstance(t, MultisetValue):
        acc = {}
        for s, w in t.entries:
            k = f[s]
            prev = acc.get(k, 0)
            acc[k] = INF if (prev == INF or w == INF) else prev + w
        return multiset_value(acc)
    if isinstance(t, DistValue):
        acc = {}
        for s, q in t.entries:
            k = f[s]
            acc[k] = acc.get(k, Fraction(0)) + q
        return dist_value(acc)
    if isinstance(t, NbhdValue):
        return NbhdValue(antichain(frozenset(f[s] for s in m) for m in t.minimals))
    raise KindMismatchError(f"not a transition value: {t!r}")


def values_equal(t: FunctorValue, u: FunctorValue) -> bool:
    """Equality of denoted behaviours; normalizes neighborhood representations."""
    if type(t) is not type(u):
        raise KindMismatchError(f"cannot compare {type(t).__name__} with {type(u).__name__}")
    if isinstance(t, NbhdValue):
        return antichain(t.minimals) == antichain(u.minimals)
    return t == u


@lru_cache(maxsize=None)
def _mass_table(value) -> dict:
    """All subset sums over the support of a weighted value, keyed by frozenset."""
    table = {frozenset(): Fraction(0) if isinstance(value, DistValue) else 0}
    for s, w in value.entries:
        for key, acc in list(table.items()):
            if w == INF or acc == INF:
                table[key | {s}] = INF
            else:
                table[key | {s}] = acc + w
    return table


def measure(t: MultisetValue | DistValue, states) -> "int | float | Fraction":
    """Total weight or mass a value assigns to a set of states."""
    supp = base(t)
    key = frozenset(states) & supp
    if len(t.entries) <= 16:
        return _mass_table(t)[key]
    total = Fraction(0) if isinstance(t, DistValue) else 0
    for s, w in t.entries:
        if s in key:
            total = INF if (w == INF or total == INF) else total + w
    return total


@dataclass(frozen=True)
class EnumerationBudget:
    """Caps for exhaustive value enumeration on a fixed state set."""

    max_weight: int = 2
    denominators: tuple = (1, 2, 3, 4)
    max_neighborhood_states: int = 5


def _subsets(items: list) -> Iterator[frozenset]:
    for mask in range(1 << len(items)):
        yield frozenset(items[i] for i in range(len(items)) if mask >> i & 1)


def enumerate_values(
    kind: FunctorKind, states: Iterable, budget: EnumerationBudget = EnumerationBudget()
) -> Iterator[FunctorValue]:
    """Yield all values over the given states within the budget.

    Complete for the full value space over the states for Kripke and
    neighborhood kinds; multiset and distribution enumerations are complete
    for the finite sub-universe the budget describes (weight cap, mass
    denominators from the given grid).
    """
    states = list(states)
    if kind.name == KRIPKE:
        for props in _subsets(list(kind.atoms)):
            for succ in _subsets(states):
                yield KripkeValue(props, succ)
    elif kind.name == MULTISET:
        def rec_weights(i, acc):
            if i == len(states):
                yield multiset_value(acc)
                return
            for w in range(budget.max_weight + 1):
                acc[states[i]] = w
                yield from rec_weights(i + 1, acc)
            del acc[states[i]]

        yield from rec_weights(0, {})
    elif kind.name == DISTRIBUTION:
        seen = set()
        for d in budget.denominators:
            for parts in _compositions(d, len(states)):
                v = dist_value({s: Fraction(p, d) for s, p in zip(states, parts) if p})
                if v not in seen:
                    seen.add(v)
                    yield v
    elif kind.name == NEIGHBORHOOD:
        if len(states) > budget.max_neighborhood_states:
            raise BudgetError(
                f"neighborhood enumeration over {len(states)} states exceeds the "
                f"cap of {budget.max_neighborhood_states}"
            )
        subsets = list(_subsets(states))

        def rec_antichain(i, chosen):
            if i == len(subsets):
                yield NbhdValue(frozenset(chosen))
                return
            yield from rec_antichain(i + 1, chosen)
            cand = subsets[i]
            if not any(cand <= m or m <= cand for m in chosen):
                chosen.append(cand)
                yield from rec_antichain(i + 1, chosen)
                chosen.pop()

        yield from rec_antichain(0, [])
    else:
        raise KindMismatchError(f"unknown functor kind {kind.name!r}")


def _compositions(total: int, parts: int) -> Iterator[tuple]:
    """All tuples of `parts` naturals summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest
