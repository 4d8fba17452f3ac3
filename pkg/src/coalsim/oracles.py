"""Deliberately naive re-implementations used to validate the engine.

The simulation oracle quantifies over every subset of the whole left carrier
with no base restriction and no per-kind shortcut.  It exists solely to
cross-check `is_simulation`; keep it dumb.
"""

from __future__ import annotations

from .errors import BudgetError, KindMismatchError
from .liftings import LambdaSignature, satisfies
from .relations import Relation
from .values import Coalgebra

ORACLE_CARRIER_CAP = 12


def brute_force_simulation_oracle(
    s: Relation, c: Coalgebra, d: Coalgebra, sig: LambdaSignature
) -> bool:
    """Simulation condition with A ranging over all subsets of the left carrier."""
    if c.kind != d.kind or sig.kind != c.kind:
        raise KindMismatchError("models and signature must share one functor kind")
    if len(c.carrier) > ORACLE_CARRIER_CAP:
        raise BudgetError(
            f"oracle is capped at {ORACLE_CARRIER_CAP} states, got {len(c.carrier)}"
        )
    carrier = list(c.carrier)
    subsets = [
        frozenset(carrier[i] for i in range(len(carrier)) if mask >> i & 1)
        for mask in range(1 << len(carrier))
    ]
    for x, y in s.pairs:
        t = c.transition[x]
        u = d.transition[y]
        for m in sig.modalities:
            for a in subsets:
                if satisfies(t, m, a) and not satisfies(u, m, s.image(a)):
                    return False
    return True
