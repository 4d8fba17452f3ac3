"""Modal operators interpreted over transition values.

Each modality is a monotone predicate lifting for its functor kind: `[]` and
`<>` over Kripke successors, nullary atoms over the proposition component,
`<k>` (strictly more than k successors counted with multiplicity) over
multisets, `L(p)` / `M(p)` (mass at least / more than p) over distributions,
and `[m]` (the tested set belongs to the system) over neighborhoods.

A signature bundles the functor kind with the finite list of modalities that
algorithmic quantifiers iterate over, plus a declared separation flag.  For
graded and probabilistic kinds the finite list is a grid; grids produced by
`auto_signature` cover every threshold distinguishable on the given models,
which is recorded in `full_grid`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .errors import BudgetError, KindMismatchError, ValidationError
from .values import (
    DISTRIBUTION,
    INF,
    KRIPKE,
    MULTISET,
    NEIGHBORHOOD,
    Coalgebra,
    DistValue,
    FunctorKind,
    FunctorValue,
    KripkeValue,
    MultisetValue,
    NbhdValue,
    _mass_table,
    _skey,
    base,
    measure,
    relabel,
)

DEFAULT_MAX_BASE = 16


def max_base_bound() -> int:
    """Cap on exhaustive subset quantification; override with COALSIM_MAX_BASE."""
    return int(os.environ.get("COALSIM_MAX_BASE", DEFAULT_MAX_BASE))


@dataclass(frozen=True)
class Modality:
    op: str
    index: Optional[int] = None
    bound: Optional[Fraction] = None
    name: Optional[str] = None

    def __post_init__(self):
        if self.op == "diamond_gt":
            if self.index is None or self.index < 0:
                raise ValidationError(f"graded index must be a natural, got {self.index!r}")
        elif self.op in ("at_least", "more_than"):
            if self.bound is None or not 0 <= self.bound <= 1:
                raise ValidationError(f"probability bound must lie in [0,1], got {self.bound!r}")
        elif self.op == "atom":
            if not self.name:
                raise ValidationError("atom modality needs a name")
        elif self.op not in ("box", "diamond", "nbhd_box"):
            raise ValidationError(f"unknown modality operator {self.op!r}")

    @property
    def nullary(self) -> bool:
        return self.op == "atom"

    def token(self) -> str:
        if self.op == "box":
            return "[]"
        if self.op == "diamond":
            return "<>"
        if self.op == "diamond_gt":
            return f"<{self.index}>"
        if self.op == "at_least":
            return f"L({self.bound})"
        if self.op == "more_than":
            return f"M({self.bound})"
        if self.op == "nbhd_box":
            return "[m]"
        return self.name


BOX = Modality("box")
DIAMOND = Modality("diamond")
NBHD_BOX = Modality("nbhd_box")


def atom(name: str) -> Modality:
    return Modality("atom", name=name)


def diamond_gt(k: int) -> Modality:
    return Modality("diamond_gt", index=k)


def at_least(p) -> Modality:
    return Modality("at_least", bound=Fraction(p))


def more_than(p) -> Modality:
    return Modality("more_than", bound=Fraction(p))


_KIND_OF_OP = {
    "box": KRIPKE,
    "diamond": KRIPKE,
    "atom": KRIPKE,
    "diamond_gt": MULTISET,
    "at_least": DISTRIBUTION,
    "more_than": DISTRIBUTION,
    "nbhd_box": NEIGHBORHOOD,
}


def modality_kind(m: Modality) -> str:
    return _KIND_OF_OP[m.op]


def satisfies(t: FunctorValue, m: Modality, states) -> bool:
    """Does the value satisfy the modality applied to the given state set?"""
    if isinstance(t, KripkeValue):
        if m.op == "box":
            return t.succ <= frozenset(states)
        if m.op == "diamond":
            return bool(t.succ & frozenset(states))
        if m.op == "atom":
            return m.name in t.props
    elif isinstance(t, MultisetValue):
        if m.op == "diamond_gt":
            return measure(t, states) > m.index
    elif isinstance(t, DistValue):
        if m.op == "at_least":
            return measure(t, states) >= m.bound
        if m.op == "more_than":
            return measure(t, states) > m.bound
    elif isinstance(t, NbhdValue):
        if m.op == "nbhd_box":
            return t.contains(states)
    raise KindMismatchError(
        f"modality {m.token()!r} is not interpretable over {type(t).__name__}"
    )


@dataclass(frozen=True)
class LambdaSignature:
    """Functor kind plus the finite modality list algorithms quantify over.

    `separating` is declared, not computed: it is set for the signature
    families known to determine a value from its satisfied (modality, set)
    pairs.  `full_grid` records that the finite grid of a graded or
    probabilistic signature covers every threshold occurring in the models it
    was resolved against; Kripke and neighborhood signatures always have it.
    """

    kind: FunctorKind
    modalities: tuple
    separating: bool
    full_grid: bool = True

    def __post_init__(self):
        for m in self.modalities:
            if modality_kind(m) != self.kind.name:
                raise KindMismatchError(
                    f"modality {m.token()!r} does not apply to kind {self.kind.name!r}"
                )
            if m.op == "atom" and m.name not in self.kind.atoms:
                raise ValidationError(f"atom {m.name!r} is not in the vocabulary")


def graded_bound(models: Sequence[Coalgebra]) -> int:
    """Largest finite subset weight any state of the models can realize.

    A grid of graded modalities up to this bound distinguishes every pair of
    distinguishable weights, including infinite ones: any finite weight a
    model realizes is at most the bound, so exceeding it certifies infinity.
    """
    best = 0
    for c in models:
        for t in c.transition.values():
            finite = sum(w for _, w in t.entries if w != INF)
            best = max(best, finite)
    return best


def prob_grid(models: Sequence[Coalgebra]) -> tuple:
    """All subset masses realized by any distribution of the models, sorted."""
    grid = {Fraction(0), Fraction(1)}
    for c in models:
        for t in c.transition.values():
            grid.update(_mass_table(t).values())
    return tuple(sorted(grid))


def _kripke_signature(kind: FunctorKind, want: set) -> LambdaSignature:
    mods = []
    if "box" in want:
        mods.append(BOX)
    if "diamond" in want:
        mods.append(DIAMOND)
    if "atoms" in want:
        mods.extend(atom(p) for p in kind.atoms)
    separating = ("box" in want or "diamond" in want) and (
        "atoms" in want or not kind.atoms
    )
    return LambdaSignature(kind, tuple(mods), separating)


def resolve_signature(literal: str, models: Sequence[Coalgebra]) -> LambdaSignature:
    """Build a signature from a literal like "kripke:box,diamond,atoms".

    Supported literals: "kripke:<parts>" with parts among box, diamond,
    atoms; "graded:0..K" and "graded:auto"; "prob:auto-grid"; "nbhd:box".
    Grid-style signatures are resolved against the models they will be used
    on, so the grid provably covers every relevant threshold.
    """
    if not models:
        raise ValidationError("signature resolution needs at least one model")
    kind = models[0].kind
    for c in models[1:]:
        if c.kind != kind:
            raise KindMismatchError(
                f"models of kinds {kind.name!r} and {c.kind.name!r} cannot share a signature"
            )
    try:
        family, _, spec = literal.partition(":")
        if family == "kripke":
            if kind.name != KRIPKE:
                raise KindMismatchError(f"signature {literal!r} needs kripke models")
            want = set(filter(None, spec.split(",")))
            unknown = want - {"box", "diamond", "atoms"}
            if unknown:
                raise ValidationError(f"unknown kripke signature parts {sorted(unknown)}")
            if not want:
                raise ValidationError("kripke signature needs at least one part")
            return _kripke_signature(kind, want)
        if family == "graded":
            if kind.name != MULTISET:
                raise KindMismatchError(f"signature {literal!r} needs multiset models")
            needed = graded_bound(models)
            if spec == "auto":
                bound = needed
            elif spec.startswith("0.."):
                bound = int(spec[3:])
            else:
                raise ValidationError(f"malformed graded signature {literal!r}")
            mods = tuple(diamond_gt(k) for k in range(bound + 1))
            return LambdaSignature(kind, mods, separating=True, full_grid=bound >= needed)
        if family == "prob":
            if kind.name != DISTRIBUTION:
                raise KindMismatchError(f"signature {literal!r} needs distribution models")
            if spec != "auto-grid":
                raise ValidationError(f"malformed probabilistic signature {literal!r}")
            mods = tuple(at_least(p) for p in prob_grid(models))
            return LambdaSignature(kind, mods, separating=True)
        if family == "nbhd":
            if kind.name != NEIGHBORHOOD:
                raise KindMismatchError(f"signature {literal!r} needs neighborhood models")
            if spec != "box":
                raise ValidationError(f"malformed neighborhood signature {literal!r}")
            return LambdaSignature(kind, (NBHD_BOX,), separating=True)
        raise ValidationError(f"unknown signature literal {literal!r}")
    except ValueError as exc:
        raise ValidationError(f"malformed signature literal {literal!r}: {exc}") from exc


DEFAULT_LITERALS = {
    KRIPKE: "kripke:box,diamond,atoms",
    MULTISET: "graded:auto",
    DISTRIBUTION: "prob:auto-grid",
    NEIGHBORHOOD: "nbhd:box",
}


def auto_signature(*models: Coalgebra) -> LambdaSignature:
    """The canonical separating signature for the models' kind."""
    return resolve_signature(DEFAULT_LITERALS[models[0].kind.name], models)


def ensure_separating(sig: LambdaSignature, *models: Coalgebra) -> None:
    """Reject signatures that cannot separate the values of these models."""
    from .errors import NotSeparatingError

    if not sig.separating:
        raise NotSeparatingError("signature is not declared separating")
    if sig.kind.name == MULTISET:
        have = max((m.index for m in sig.modalities), default=-1)
        need = graded_bound(models)
        if have < need:
            raise NotSeparatingError(
                f"graded grid 0..{have} cannot separate these models; weights reach {need}"
            )
    if sig.kind.name == DISTRIBUTION:
        have = {m.bound for m in sig.modalities}
        missing = [p for p in prob_grid(models) if p not in have]
        if missing:
            raise NotSeparatingError(
                f"probability grid misses realized masses {[str(p) for p in missing]}"
            )


def _joint_base(t: FunctorValue, u: FunctorValue) -> list:
    joint = sorted(base(t) | base(u), key=_skey)
    bound = max_base_bound()
    if len(joint) > bound:
        raise BudgetError(
            f"joint base has {len(joint)} states, above the exhaustive bound {bound} "
            f"(override with COALSIM_MAX_BASE)"
        )
    return joint


def _subsets_of(items: list):
    for mask in range(1 << len(items)):
        yield frozenset(items[i] for i in range(len(items)) if mask >> i & 1)


def lambda_leq(
    t: FunctorValue, u: FunctorValue, sig: LambdaSignature, universe=None
) -> bool:
    """Pointwise ordering of values: everything t satisfies, u satisfies.

    Quantification runs over subsets of the joint base of the two values,
    which is equivalent to quantifying over any larger universe because
    satisfaction only sees the base and all modalities are monotone.
    """
    if type(t) is not type(u):
        raise KindMismatchError(f"cannot order {type(t).__name__} against {type(u).__name__}")
    joint = _joint_base(t, u)
    if universe is not None and not set(joint) <= set(universe):
        raise ValidationError("universe does not contain the values' bases")
    for m in sig.modalities:
        if m.nullary:
            if satisfies(t, m, frozenset()) and not satisfies(u, m, frozenset()):
                return False
            continue
        for a in _subsets_of(joint):
            if satisfies(t, m, a) and not satisfies(u, m, a):
                return False
    return True


def distinguishing_pair(
    t: FunctorValue, u: FunctorValue, sig: LambdaSignature, universe=None
):
    """A (modality, state set) satisfied by exactly one of the two values.

    Returns None when no subset of the universe distinguishes them; for a
    separating signature over a universe containing both bases this certifies
    the values are equal.
    """
    if type(t) is not type(u):
        raise KindMismatchError(f"cannot compare {type(t).__name__} against {type(u).__name__}")
    joint = _joint_base(t, u)
    if universe is not None and not set(joint) <= set(universe):
        raise ValidationError("universe does not contain the values' bases")
    for m in sig.modalities:
        if m.nullary:
            if satisfies(t, m, frozenset()) != satisfies(u, m, frozenset()):
                return m, frozenset()
            continue
        for a in _subsets_of(joint):
            if satisfies(t, m, a) != satisfies(u, m, a):
                return m, a
    return None


def is_lambda_homomorphism(
    f: Mapping, c: Coalgebra, d: Coalgebra, sig: LambdaSignature
) -> bool:
    """Pointwise criterion: the pushed-forward value of x sits below the value of f(x)."""
    missing = [x for x in c.carrier if x not in f]
    if missing:
        raise ValidationError(f"map is not defined on carrier states {missing}")
    outside = sorted({f[x] for x in c.carrier} - set(d.carrier), key=_skey)
    if outside:
        raise ValidationError(f"map targets states outside the codomain carrier: {outside}")
    return all(
        lambda_leq(relabel(c.transition[x], f), d.transition[f[x]], sig)
        for x in c.carrier
    )
