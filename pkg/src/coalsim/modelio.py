"""JSON formats for models, relations, and result artifacts.

Model files look like::

    {"functor": "kripke", "atoms": ["p"], "states": ["x", "y"],
     "transition": {"x": {"props": ["p"], "succ": ["y"]}, ...}}

with per-kind transition values: Kripke ``{"props": [...], "succ": [...]}``,
multiset ``{"state": weight-or-"inf", ...}``, distribution
``{"state": "n/d", ...}``, neighborhood ``{"minimals": [["a"], ["b", "c"]]}``.
Relation files are ``{"pairs": [["x", "y"], ...]}``.  Distributions whose
masses do not sum to one are rejected, never renormalized.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Callable

from .errors import ValidationError
from .relations import Relation, relation
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
    coalgebra,
    dist_value,
    kripke_kind,
    kripke_value,
    multiset_value,
    nbhd_value,
    _skey,
)

_PLAIN_KINDS = {
    MULTISET: FunctorKind(MULTISET),
    DISTRIBUTION: FunctorKind(DISTRIBUTION),
    NEIGHBORHOOD: FunctorKind(NEIGHBORHOOD),
}


def _parse_weight(raw, state):
    if raw == "inf":
        return INF
    if isinstance(raw, int) and not isinstance(raw, bool) and raw >= 0:
        return raw
    raise ValidationError(f"weight for {state!r} must be a natural or \"inf\", got {raw!r}")


def _parse_mass(raw, state):
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"mass for {state!r} is not a rational: {raw!r}") from exc
    if isinstance(raw, int) and not isinstance(raw, bool):
        return Fraction(raw)
    raise ValidationError(f"mass for {state!r} must be \"n/d\" or an integer, got {raw!r}")


def value_from_json(kind_name: str, raw) -> FunctorValue:
    if kind_name == KRIPKE:
        if not isinstance(raw, dict) or set(raw) - {"props", "succ"}:
            raise ValidationError(f"kripke value needs props/succ, got {raw!r}")
        return kripke_value(raw.get("props", []), raw.get("succ", []))
    if kind_name == MULTISET:
        if not isinstance(raw, dict):
            raise ValidationError(f"multiset value must be a weight map, got {raw!r}")
        return multiset_value({s: _parse_weight(w, s) for s, w in raw.items()})
    if kind_name == DISTRIBUTION:
        if not isinstance(raw, dict):
            raise ValidationError(f"distribution value must be a mass map, got {raw!r}")
        return dist_value({s: _parse_mass(q, s) for s, q in raw.items()})
    if kind_name == NEIGHBORHOOD:
        if not isinstance(raw, dict) or set(raw) != {"minimals"}:
            raise ValidationError(f"neighborhood value needs minimals, got {raw!r}")
        return nbhd_value(raw["minimals"])
    raise ValidationError(f"unknown functor {kind_name!r}")


def value_to_json(v: FunctorValue, label: Callable = str):
    """Serialize one transition value; `label` renders state names."""
    if isinstance(v, KripkeValue):
        return {
            "props": sorted(v.props),
            "succ": sorted((label(s) for s in v.succ), key=_skey),
        }
    if isinstance(v, MultisetValue):
        return {
            "entries": [
                [label(s), "inf" if w == INF else w] for s, w in v.entries
            ]
        }
    if isinstance(v, DistValue):
        return {"entries": [[label(s), str(q)] for s, q in v.entries]}
    if isinstance(v, NbhdValue):
        return {
            "minimals": sorted(
                (sorted((label(s) for s in m), key=_skey) for m in v.minimals),
                key=_skey,
            )
        }
    raise ValidationError(f"not a transition value: {v!r}")


def coalgebra_from_dict(doc: dict) -> Coalgebra:
    if not isinstance(doc, dict):
        raise ValidationError("model document must be a JSON object")
    for field in ("functor", "states", "transition"):
        if field not in doc:
            raise ValidationError(f"model document misses the {field!r} field")
    name = doc["functor"]
    if name == KRIPKE:
        kind = kripke_kind(doc.get("atoms", []))
    elif name in _PLAIN_KINDS:
        if "atoms" in doc:
            raise ValidationError(f"functor {name!r} takes no atom vocabulary")
        kind = _PLAIN_KINDS[name]
    else:
        raise ValidationError(f"unknown functor {name!r}")
    states = doc["states"]
    transition = doc["transition"]
    if not isinstance(transition, dict):
        raise ValidationError("transition must map states to values")
    values = {s: value_from_json(name, raw) for s, raw in transition.items()}
    return coalgebra(kind, states, values)


def coalgebra_to_dict(c: Coalgebra) -> dict:
    name = c.kind.name
    doc = {"functor": name, "states": list(c.carrier)}
    if name == KRIPKE:
        doc["atoms"] = list(c.kind.atoms)
    if name == KRIPKE:
        tr = {
            s: {
                "props": sorted(c.transition[s].props),
                "succ": sorted(c.transition[s].succ, key=_skey),
            }
            for s in c.carrier
        }
    elif name == MULTISET:
        tr = {
            s: {z: ("inf" if w == INF else w) for z, w in c.transition[s].entries}
            for s in c.carrier
        }
    elif name == DISTRIBUTION:
        tr = {
            s: {z: str(q) for z, q in c.transition[s].entries} for s in c.carrier
        }
    else:
        tr = {
            s: {
                "minimals": sorted(
                    (sorted(m, key=_skey) for m in c.transition[s].minimals), key=_skey
                )
            }
            for s in c.carrier
        }
    doc["transition"] = tr
    return doc


def load_coalgebra(path: str) -> Coalgebra:
    with open(path, encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON: {exc}") from exc
    return coalgebra_from_dict(doc)


def relation_from_dict(doc: dict, c: Coalgebra = None, d: Coalgebra = None) -> Relation:
    if not isinstance(doc, dict) or "pairs" not in doc:
        raise ValidationError("relation document needs a \"pairs\" field")
    pairs = []
    for raw in doc["pairs"]:
        if not isinstance(raw, (list, tuple)) or len(raw) != 2:
            raise ValidationError(f"relation pair must be a two-element list, got {raw!r}")
        pairs.append((raw[0], raw[1]))
    if c is not None and d is not None:
        return relation(c.carrier, d.carrier, pairs)
    left = sorted({p[0] for p in pairs})
    right = sorted({p[1] for p in pairs})
    return relation(left, right, pairs)


def load_relation(path: str, c: Coalgebra = None, d: Coalgebra = None) -> Relation:
    with open(path, encoding="utf-8") as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON: {exc}") from exc
    return relation_from_dict(doc, c, d)


def relation_to_dict(s: Relation) -> dict:
    return {"pairs": [[x, y] for x, y in s.sorted_pairs()]}


def dump_json(doc) -> str:
    """Canonical JSON text: sorted keys, stable separators, trailing newline."""
    return json.dumps(doc, sort_keys=True, separators=(", ", ": ")) + "\n"
