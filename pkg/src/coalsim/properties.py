"""Randomized theorem checks, runnable by name.

Each property executes a cross-module claim on seeded random instances and
reports counterexamples; the claims and their identifiers are listed in
`theorem_matrix.json` next to this module.  Trial seeds are derived as
`seed + trial_index`, so runs are reproducible and trials are independent.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, replace
from importlib import resources
from typing import Callable

from .behaviour import (
    behavioural_equivalence,
    n_step_partition,
    t_bisim_up_to_difunctionality_check,
    t_bisimulation_check,
)
from .errors import InternalCheckError, ValidationError
from .formulas import evaluate, rank
from .generators import (
    GeneratorConfig,
    generate_coalgebra,
    random_positive_formula,
    random_relation,
)
from .liftings import (
    auto_signature,
    at_least,
    atom,
    diamond_gt,
    lambda_leq,
    is_lambda_homomorphism,
    distinguishing_pair,
    more_than,
    satisfies,
    BOX,
    DIAMOND,
    NBHD_BOX,
)
from .modelio import coalgebra_to_dict, relation_to_dict
from .oracles import brute_force_simulation_oracle
from .relations import difunctional_closure, identity_relation, relation
from .simulation import (
    greatest_bisimulation,
    greatest_n_bisimulation,
    greatest_simulation,
    is_bisimulation,
    is_bisimulation_up_to_difunctionality,
    is_n_bisimulation,
    is_n_simulation,
    is_simulation,
    n_simulation_chain,
    simulation_fast_path_holds,
)
from .values import (
    DISTRIBUTION,
    DISTRIBUTION_KIND,
    KRIPKE,
    MULTISET,
    MULTISET_KIND,
    NEIGHBORHOOD,
    NEIGHBORHOOD_KIND,
    Coalgebra,
    EnumerationBudget,
    base,
    enumerate_values,
    kripke_kind,
    relabel,
    values_equal,
    _skey,
)

KIND_POOL = (
    kripke_kind(("p", "q")),
    MULTISET_KIND,
    DISTRIBUTION_KIND,
    NEIGHBORHOOD_KIND,
)

WPP_KIND_POOL = (kripke_kind(("p", "q")), MULTISET_KIND, DISTRIBUTION_KIND)


@dataclass
class PropertyRunReport:
    name: str
    trials: int
    counterexamples: list
    elapsed: float
    asserting: bool = True

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_dict(self, include_elapsed: bool = False) -> dict:
        doc = {
            "property": self.name,
            "trials": self.trials,
            "counterexamples": self.counterexamples,
            "passed": self.passed,
            "asserting": self.asserting,
        }
        if include_elapsed:
            doc["elapsed"] = self.elapsed
        return doc


def _models(trial_seed: int, kind, max_states=5, **overrides):
    rng = random.Random(trial_seed)
    cfg = GeneratorConfig(
        seed=rng.getrandbits(32), kind=kind, max_states=max_states, **overrides
    )
    c = generate_coalgebra(cfg)
    d = generate_coalgebra(replace(cfg, seed=rng.getrandbits(32)))
    return rng, c, d


def _instance_doc(c, d, **extra) -> dict:
    doc = {"left": coalgebra_to_dict(c), "right": coalgebra_to_dict(d)}
    doc.update(extra)
    return doc


def _random_modality(rng, kind, values):
    name = kind.name
    if name == KRIPKE:
        pool = [BOX, DIAMOND] + [atom(p) for p in kind.atoms]
        return pool[rng.randrange(len(pool))]
    if name == MULTISET:
        return diamond_gt(rng.randint(0, 5))
    if name == DISTRIBUTION:
        from fractions import Fraction

        p = Fraction(rng.randint(0, 4), 4)
        return at_least(p) if rng.random() < 0.5 else more_than(p)
    return NBHD_BOX


def _prop_oracle_agreement(trial, seed):
    rng, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=5)
    sig = auto_signature(c, d)
    s = random_relation(rng, c, d)
    engine = is_simulation(s, c, d, sig).holds
    oracle = brute_force_simulation_oracle(s, c, d, sig)
    if engine != oracle:
        return _instance_doc(
            c, d, relation=relation_to_dict(s), engine=engine, oracle=oracle
        )
    return None


def _prop_fast_path(trial, seed):
    rng, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=5)
    sig = auto_signature(c, d)
    s = random_relation(rng, c, d)
    generic = is_simulation(s, c, d, sig).holds
    fast = simulation_fast_path_holds(s, c, d, sig)
    if generic != fast:
        return _instance_doc(
            c, d, relation=relation_to_dict(s), generic=generic, fast=fast
        )
    return None


def _prop_preservation(trial, seed):
    rng, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=5)
    sig = auto_signature(c, d)
    s = greatest_simulation(c, d, sig)
    if not s.pairs:
        return None
    for _ in range(12):
        x, y = sorted(s.pairs, key=_skey)[rng.randrange(len(s.pairs))]
        f = random_positive_formula(rng, sig, max_rank=4)
        if evaluate(f, c, x) and not evaluate(f, d, y):
            from .formulas import format_formula

            return _instance_doc(
                c,
                d,
                relation=relation_to_dict(s),
                pair=[x, y],
                formula=format_formula(f),
            )
    return None


def _prop_rank_preservation(trial, seed):
    rng, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=5)
    sig = auto_signature(c, d)
    n = trial % 5
    s = n_simulation_chain(c, d, sig, n)[n]
    if not s.pairs:
        return None
    for _ in range(12):
        x, y = sorted(s.pairs, key=_skey)[rng.randrange(len(s.pairs))]
        f = random_positive_formula(rng, sig, max_rank=n)
        if rank(f) > n:
            raise InternalCheckError("formula generator exceeded its rank bound")
        if evaluate(f, c, x) and not evaluate(f, d, y):
            from .formulas import format_formula

            return _instance_doc(
                c,
                d,
                relation=relation_to_dict(s),
                depth=n,
                pair=[x, y],
                formula=format_formula(f),
            )
    return None


def _prop_n_bisim_n_step(trial, seed):
    _, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=5)
    sig = auto_signature(c, d)
    n = trial % 6
    greatest = greatest_n_bisimulation(c, d, sig, n)
    partition = n_step_partition(c, d, n).cross_relation()
    if greatest.pairs != partition.pairs:
        return _instance_doc(
            c,
            d,
            depth=n,
            greatest=relation_to_dict(greatest),
            partition=relation_to_dict(partition),
        )
    return None


def _prop_soundness_completeness(trial, seed):
    _, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=5)
    sig = auto_signature(c, d)
    try:
        behavioural_equivalence(c, d, sig)
    except InternalCheckError as exc:
        return _instance_doc(c, d, failure=str(exc))
    return None


def _prop_prop_difunctional(trial, seed):
    rng, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=5)
    sig = auto_signature(c, d)
    s = random_relation(rng, c, d)
    up_to = is_bisimulation_up_to_difunctionality(s, c, d, sig).holds
    closed = is_bisimulation(difunctional_closure(s), c, d, sig).holds
    if up_to != closed:
        return _instance_doc(
            c, d, relation=relation_to_dict(s), up_to=up_to, closure=closed
        )
    return None


def _candidate_relations(rng, c, d, sig, small: bool):
    """Relations likely to admit couplings, plus purely random ones."""
    out = [random_relation(rng, c, d, density=0.3 if small else 0.4)]
    if c.carrier == d.carrier and c.transition == d.transition:
        out.append(identity_relation(c.carrier))
    gb = greatest_bisimulation(c, d, sig)
    out.append(gb)
    if gb.pairs:
        keep = [p for p in gb.sorted_pairs() if rng.random() < 0.6]
        out.append(relation(c.carrier, d.carrier, keep))
    return out


def _prop_t_implies_lambda(trial, seed):
    kind = KIND_POOL[trial % 4]
    small = kind.name == NEIGHBORHOOD
    rng, c, d = _models(seed + trial, kind, max_states=3 if small else 5)
    sig = auto_signature(c, d)
    for s in _candidate_relations(rng, c, d, sig, small):
        if small and len(s.pairs) > 4:
            continue
        coupling = t_bisimulation_check(s, c, d)
        if coupling is not None and not is_bisimulation(s, c, d, sig).holds:
            return _instance_doc(
                c, d, relation=relation_to_dict(s), variant="plain"
            )
        if small and len(difunctional_closure(s).pairs) > 4:
            continue
        up_to = t_bisim_up_to_difunctionality_check(s, c, d)
        if up_to is not None and not is_bisimulation_up_to_difunctionality(
            s, c, d, sig
        ).holds:
            return _instance_doc(
                c, d, relation=relation_to_dict(s), variant="up-to"
            )
    return None


def _all_relations(c, d):
    pool = [(x, y) for x in c.carrier for y in d.carrier]
    for mask in range(1 << len(pool)):
        yield relation(
            c.carrier, d.carrier, [pool[i] for i in range(len(pool)) if mask >> i & 1]
        )


def _prop_t_bisim(trial, seed):
    kind = WPP_KIND_POOL[trial % 3]
    exhaustive = trial % 5 == 0
    rng, c, d = _models(
        seed + trial, kind, max_states=2 if exhaustive else 5, min_states=1
    )
    sig = auto_signature(c, d)
    if exhaustive:
        for s in _all_relations(c, d):
            if is_bisimulation(s, c, d, sig).holds:
                if s.is_difunctional() and t_bisimulation_check(s, c, d) is None:
                    return _instance_doc(
                        c, d, relation=relation_to_dict(s), variant="plain"
                    )
            if (
                is_bisimulation_up_to_difunctionality(s, c, d, sig).holds
                and t_bisim_up_to_difunctionality_check(s, c, d) is None
            ):
                return _instance_doc(
                    c, d, relation=relation_to_dict(s), variant="up-to"
                )
        return None
    gb = greatest_bisimulation(c, d, sig)
    candidates = [gb]
    for _ in range(3):
        keep = [p for p in gb.sorted_pairs() if rng.random() < 0.6]
        candidates.append(relation(c.carrier, d.carrier, keep))
    candidates.append(random_relation(rng, c, d, density=0.3))
    for s in candidates:
        if s.is_difunctional() and is_bisimulation(s, c, d, sig).holds:
            if t_bisimulation_check(s, c, d) is None:
                return _instance_doc(
                    c, d, relation=relation_to_dict(s), variant="plain"
                )
        if is_bisimulation_up_to_difunctionality(s, c, d, sig).holds:
            if t_bisim_up_to_difunctionality_check(s, c, d) is None:
                return _instance_doc(
                    c, d, relation=relation_to_dict(s), variant="up-to"
                )
    return None


def _prop_functor_laws(trial, seed):
    rng, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=5)
    labels = [f"t{i}" for i in range(4)]
    relabeling = {x: labels[rng.randrange(len(labels))] for x in c.carrier}
    second = {t: f"u{rng.randrange(3)}" for t in labels}
    for x in c.carrier:
        t = c.transition[x]
        ident = {z: z for z in base(t)}
        if not values_equal(relabel(t, ident), t):
            return _instance_doc(c, d, state=x, law="identity")
        once = relabel(relabel(t, relabeling), second)
        composed = relabel(t, {z: second[relabeling[z]] for z in relabeling})
        if not values_equal(once, composed):
            return _instance_doc(c, d, state=x, law="composition")
        m = _random_modality(rng, c.kind, [t])
        subset = frozenset(l for l in labels if rng.random() < 0.5)
        pushed = satisfies(relabel(t, relabeling), m, subset)
        pulled = satisfies(t, m, frozenset(z for z in relabeling if relabeling[z] in subset))
        if pushed != pulled:
            return _instance_doc(
                c, d, state=x, law="naturality", modality=m.token()
            )
    return None


def _find_simulations(rng, c, d, sig, want=2, attempts=8):
    found = []
    for _ in range(attempts):
        s = random_relation(rng, c, d, density=0.25)
        if is_simulation(s, c, d, sig).holds:
            found.append(s)
        if len(found) >= want:
            break
    return found


def _prop_stability(trial, seed):
    rng, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=4)
    sig = auto_signature(c, d)
    ident = identity_relation(c.carrier)
    if not is_simulation(ident, c, c, sig).holds:
        return _instance_doc(c, c, relation=relation_to_dict(ident), law="identity")
    sims = [greatest_simulation(c, d, sig)] + _find_simulations(rng, c, d, sig)
    union = sims[0]
    for s in sims[1:]:
        union = union.union(s)
    if not is_simulation(union, c, d, sig).holds:
        return _instance_doc(c, d, relation=relation_to_dict(union), law="union")
    rng2 = random.Random(seed + trial + 1)
    cfg = GeneratorConfig(seed=rng2.getrandbits(32), kind=c.kind, max_states=4)
    e = generate_coalgebra(cfg)
    sig_ce = auto_signature(c, d, e)
    first = greatest_simulation(c, d, sig_ce)
    second = greatest_simulation(d, e, sig_ce)
    composite = first.compose(second)
    if not is_simulation(composite, c, e, sig_ce).holds:
        return _instance_doc(
            c, e, relation=relation_to_dict(composite), law="composition"
        )
    return None


def _prop_monotony(trial, seed):
    rng, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=5)
    for x in c.carrier:
        t = c.transition[x]
        m = _random_modality(rng, c.kind, [t])
        small = frozenset(z for z in c.carrier if rng.random() < 0.4)
        big = small | frozenset(z for z in c.carrier if rng.random() < 0.4)
        if satisfies(t, m, small) and not satisfies(t, m, big):
            return _instance_doc(c, d, state=x, modality=m.token())
    return None


def _prop_preorder(trial, seed):
    _, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=4)
    sig = auto_signature(c, d)
    values = [c.transition[x] for x in c.carrier] + [d.transition[y] for y in d.carrier]
    for t in values:
        if not lambda_leq(t, t, sig):
            return _instance_doc(c, d, law="reflexivity")
    for t in values:
        for u in values:
            if not lambda_leq(t, u, sig):
                continue
            for v in values:
                if lambda_leq(u, v, sig) and not lambda_leq(t, v, sig):
                    return _instance_doc(c, d, law="transitivity")
    return None


def _prop_separation(trial, seed):
    rng, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=4)
    sig = auto_signature(c, d)
    states = list(c.carrier)
    x = states[rng.randrange(len(states))]
    y = states[rng.randrange(len(states))]
    t, u = c.transition[x], c.transition[y]
    witness = distinguishing_pair(t, u, sig)
    if values_equal(t, u) and witness is not None:
        return _instance_doc(c, c, pair=[x, y], unexpected=witness[0].token())
    if not values_equal(t, u) and witness is None:
        return _instance_doc(c, c, pair=[x, y], missing=True)
    return None


def _prop_hom_agreement(trial, seed):
    rng, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=4)
    sig = auto_signature(c, d)
    f = {x: d.carrier[rng.randrange(len(d.carrier))] for x in c.carrier}
    pointwise = is_lambda_homomorphism(f, c, d, sig)
    graph = relation(c.carrier, d.carrier, [(x, f[x]) for x in c.carrier])
    relational = is_simulation(graph, c, d, sig).holds
    if pointwise != relational:
        return _instance_doc(
            c, d, map={str(k): v for k, v in f.items()}, pointwise=pointwise,
            relational=relational,
        )
    return None


def _prop_base_guarantee(trial, seed):
    rng, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=5)
    for x in c.carrier:
        t = c.transition[x]
        m = _random_modality(rng, c.kind, [t])
        a = frozenset(z for z in c.carrier if rng.random() < 0.5)
        if satisfies(t, m, a) != satisfies(t, m, a & base(t)):
            return _instance_doc(c, d, state=x, modality=m.token())
    return None


def _prop_injectivity(trial, seed):
    rng, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=4)
    targets = [f"j{i}" for i in range(len(c.carrier) + 3)]
    rng.shuffle(targets)
    injection = {x: targets[i] for i, x in enumerate(c.carrier)}
    states = list(c.carrier)
    x = states[rng.randrange(len(states))]
    y = states[rng.randrange(len(states))]
    t, u = c.transition[x], c.transition[y]
    if not values_equal(t, u) and values_equal(
        relabel(t, injection), relabel(u, injection)
    ):
        return _instance_doc(c, c, pair=[x, y])
    return None


def _prop_nstep_is_n_bisim(trial, seed):
    _, c, d = _models(seed + trial, KIND_POOL[trial % 4], max_states=5)
    sig = auto_signature(c, d)
    n = trial % 6
    s = n_step_partition(c, d, n).cross_relation()
    if not is_n_simulation(s, c, d, sig, n):
        return _instance_doc(c, d, depth=n, direction="forward")
    if not is_n_simulation(s.converse(), d, c, sig, n):
        return _instance_doc(c, d, depth=n, direction="backward")
    if not is_n_bisimulation(s, c, d, sig, n):
        return _instance_doc(c, d, depth=n, direction="synchronized")
    return None


def _tiny_model_pool(kind_name: str):
    """Deterministic exhaustive pool of very small models for the search."""
    if kind_name == KRIPKE:
        kind = kripke_kind(())
        states = ["s0", "s1"]
        budget = EnumerationBudget()
    elif kind_name == DISTRIBUTION:
        kind = DISTRIBUTION_KIND
        states = ["s0", "s1"]
        budget = EnumerationBudget(denominators=(1, 2))
    else:
        kind = MULTISET_KIND
        states = ["s0", "s1"]
        budget = EnumerationBudget(max_weight=1)
    values = list(enumerate_values(kind, states, budget))
    models = []
    for v0 in values:
        for v1 in values:
            models.append(Coalgebra(kind, tuple(states), {"s0": v0, "s1": v1}))
    return models


def _prop_open_problem_search(trial, seed):
    kind_name = (KRIPKE, DISTRIBUTION, MULTISET)[trial % 3]
    pool = _tiny_model_pool(kind_name)
    rng = random.Random(seed + trial)
    c = pool[rng.randrange(len(pool))]
    d = pool[rng.randrange(len(pool))]
    sig = auto_signature(c, d)
    for s in _all_relations(c, d):
        if s.is_difunctional():
            continue
        if is_bisimulation(s, c, d, sig).holds and t_bisimulation_check(s, c, d) is None:
            return _instance_doc(c, d, relation=relation_to_dict(s))
    return None


@dataclass(frozen=True)
class PropertySpec:
    name: str
    statement: str
    runner: Callable
    asserting: bool = True


PROPERTIES = {
    spec.name: spec
    for spec in (
        PropertySpec(
            "oracle-agreement",
            "The base-restricted simulation check agrees with full-subset brute force.",
            _prop_oracle_agreement,
        ),
        PropertySpec(
            "fast-path",
            "Per-kind simulation characterizations agree with the generic engine.",
            _prop_fast_path,
        ),
        PropertySpec(
            "preservation",
            "States related by a simulation preserve all positive formulas.",
            _prop_preservation,
        ),
        PropertySpec(
            "rank-preservation",
            "Depth-n simulations preserve positive formulas of rank at most n.",
            _prop_rank_preservation,
        ),
        PropertySpec(
            "n-bisim-n-step",
            "The greatest depth-n bisimulation equals the depth-n partition "
            "restricted to cross pairs, for separating signatures.",
            _prop_n_bisim_n_step,
        ),
        PropertySpec(
            "soundness-completeness",
            "Greatest bisimulation, stabilized partition, and quotient witness "
            "agree on behavioural equivalence.",
            _prop_soundness_completeness,
        ),
        PropertySpec(
            "prop-difunctional",
            "A relation is a bisimulation up to difunctionality exactly when its "
            "difunctional closure is a bisimulation.",
            _prop_prop_difunctional,
        ),
        PropertySpec(
            "t-implies-lambda",
            "Every relation with a coupling witness passes the relational "
            "bisimulation check (plain and up-to variants).",
            _prop_t_implies_lambda,
        ),
        PropertySpec(
            "t-bisim",
            "On weak-pullback-preserving kinds with separating signatures, "
            "difunctional bisimulations admit couplings and up-to bisimulations "
            "admit up-to couplings.",
            _prop_t_bisim,
        ),
        PropertySpec(
            "functor-laws",
            "Relabeling satisfies identity and composition laws, and satisfaction "
            "is natural with respect to relabeling.",
            _prop_functor_laws,
        ),
        PropertySpec(
            "stability",
            "Simulations are closed under union and composition, and equality is "
            "a simulation.",
            _prop_stability,
        ),
        PropertySpec(
            "monotony",
            "Enlarging the observed set never falsifies a satisfied modality.",
            _prop_monotony,
        ),
        PropertySpec(
            "preorder",
            "The pointwise value ordering is reflexive and transitive.",
            _prop_preorder,
        ),
        PropertySpec(
            "separation",
            "Under a separating signature, distinct values over a common carrier "
            "admit a distinguishing observation, and equal values admit none.",
            _prop_separation,
        ),
        PropertySpec(
            "hom-agreement",
            "The pointwise-ordering and graph-simulation characterizations of "
            "homomorphisms agree.",
            _prop_hom_agreement,
        ),
        PropertySpec(
            "base-guarantee",
            "Satisfaction of any modality depends only on the observed set's "
            "intersection with the value's base.",
            _prop_base_guarantee,
        ),
        PropertySpec(
            "injectivity",
            "Injective relabeling preserves distinctness of values.",
            _prop_injectivity,
        ),
        PropertySpec(
            "nstep-is-n-bisim",
            "Depth-n partitions are depth-n bisimulations in both directions.",
            _prop_nstep_is_n_bisim,
        ),
        PropertySpec(
            "open-problem-search",
            "Search for non-difunctional bisimulations without couplings on "
            "weak-pullback-preserving kinds; reports findings, never fails.",
            _prop_open_problem_search,
            asserting=False,
        ),
    )
}


def run_property_suite(name: str, trials: int, seed: int) -> PropertyRunReport:
    """Run one named property for the given number of derived-seed trials."""
    if name not in PROPERTIES:
        known = ", ".join(sorted(PROPERTIES))
        raise ValidationError(f"unknown property {name!r}; known: {known}")
    spec = PROPERTIES[name]
    start = time.perf_counter()
    counterexamples = []
    for trial in range(trials):
        finding = spec.runner(trial, seed)
        if finding is not None:
            finding["trial"] = trial
            counterexamples.append(finding)
            if spec.asserting and len(counterexamples) >= 5:
                break
    elapsed = time.perf_counter() - start
    return PropertyRunReport(
        name, trials, counterexamples, elapsed, asserting=spec.asserting
    )


def theorem_matrix() -> list:
    """The shipped property-to-claim manifest, cross-checked against the registry."""
    with resources.files(__package__).joinpath("theorem_matrix.json").open(
        "r", encoding="utf-8"
    ) as handle:
        manifest = json.load(handle)
    listed = {entry["property"] for entry in manifest}
    if listed != set(PROPERTIES):
        raise InternalCheckError("theorem matrix is out of sync with the registry")
    return manifest
