import random
from fractions import Fraction

import pytest

from coalsim import (
    BudgetError,
    GeneratorConfig,
    InfiniteWeightError,
    NotSeparatingError,
    QuotientUndefined,
    auto_signature,
    behavioural_equivalence,
    generate_coalgebra,
    greatest_bisimulation,
    identity_relation,
    is_bisimulation,
    is_bisimulation_up_to_difunctionality,
    kripke_kind,
    n_step_partition,
    quotient_witness,
    random_relation,
    relation,
    resolve_signature,
    stabilized_partition,
    t_bisim_up_to_difunctionality_check,
    t_bisimulation_check,
    values_equal,
    verify_coupling,
)
from coalsim.transport import feasible_transport
from coalsim.values import INF, relabel

from conftest import dist_model, kripke_model, multiset_model, nbhd_model


def test_zero_step_partition_is_single_block(chain3_vs_chain2):
    c, d = chain3_vs_chain2
    p = n_step_partition(c, d, 0)
    assert len(p.blocks) == 1


def test_terminal_vs_live_split_at_depth_one():
    c = kripke_model({"x": []})
    d = kripke_model({"y": ["y"]})
    p0 = n_step_partition(c, d, 0)
    p1 = n_step_partition(c, d, 1)
    assert p0.same_block("x", "y")
    assert not p1.same_block("x", "y")


def test_three_chain_vs_two_chain_splits_exactly_at_two(chain3_vs_chain2):
    c, d = chain3_vs_chain2
    assert n_step_partition(c, d, 1).same_block("x0", "y0")
    assert not n_step_partition(c, d, 2).same_block("x0", "y0")


def test_stabilized_partition_depth(chain3_vs_chain2):
    c, d = chain3_vs_chain2
    part, depth = stabilized_partition(c, d)
    assert depth <= len(c.carrier) + len(d.carrier)
    again = n_step_partition(c, d, depth)
    assert part.cross_relation().pairs == again.cross_relation().pairs


def test_behavioural_equivalence_contains_identity():
    c = kripke_model({"x": ["y"], "y": []}, atoms=["p"], props={"x": ["p"]})
    sig = auto_signature(c, c)
    assert identity_relation(c.carrier).pairs <= behavioural_equivalence(c, c, sig).pairs


def test_behavioural_equivalence_unfolding_classic():
    cyc = kripke_model(
        {"x0": ["x1"], "x1": ["x0"]}, atoms=["p"], props={"x0": ["p"], "x1": ["p"]}
    )
    loop = kripke_model({"y": ["y"]}, atoms=["p"], props={"y": ["p"]})
    sig = auto_signature(cyc, loop)
    assert behavioural_equivalence(cyc, loop, sig).pairs == {("x0", "y"), ("x1", "y")}


def test_behavioural_equivalence_graded_mass_merge():
    c = multiset_model({"x": {"u": 2}, "u": {}})
    d = multiset_model({"y": {"v": 1, "w": 1}, "v": {}, "w": {}})
    sig = auto_signature(c, d)
    pairs = behavioural_equivalence(c, d, sig).pairs
    assert ("x", "y") in pairs
    assert ("u", "v") in pairs and ("u", "w") in pairs


def test_behavioural_equivalence_requires_separating_signature():
    c = kripke_model({"x": []}, atoms=["p"])
    sig = resolve_signature("kripke:box", [c, c])
    with pytest.raises(NotSeparatingError):
        behavioural_equivalence(c, c, sig)


def test_quotient_witness_identity():
    c = kripke_model({"x": ["y"], "y": []})
    w = quotient_witness(identity_relation(c.carrier), c, c)
    assert len(w.blocks) == len(c.carrier)
    for x in c.carrier:
        assert values_equal(
            relabel(c.transition[x], w.kappa_left), w.structure[w.kappa_left[x]]
        )


def test_quotient_witness_succeeds_on_behavioural_equivalence():
    for seed in range(12):
        kind = (kripke_kind(("p",)), multiset_model({"u": {}}).kind)[seed % 2]
        c = generate_coalgebra(GeneratorConfig(seed=seed, kind=kind, max_states=5))
        d = generate_coalgebra(GeneratorConfig(seed=seed + 3, kind=kind, max_states=5))
        sig = auto_signature(c, d)
        rel = behavioural_equivalence(c, d, sig)
        quotient_witness(rel, c, d)


def test_quotient_witness_fails_with_evidence():
    c = kripke_model({"x": []})
    d = kripke_model({"y": ["y"]})
    with pytest.raises(QuotientUndefined) as err:
        quotient_witness(relation(c.carrier, d.carrier, [("x", "y")]), c, d)
    assert err.value.value_a.succ != err.value.value_b.succ


def test_tbisim_kripke_canonical_candidate():
    c = kripke_model({"x": ["a", "b"], "a": [], "b": []})
    d = kripke_model({"y": ["c"], "c": []})
    s = relation(c.carrier, d.carrier, [("x", "y"), ("a", "c"), ("b", "c")])
    coupling = t_bisimulation_check(s, c, d)
    assert coupling is not None
    assert coupling.value_for(("x", "y")).succ == {("a", "c"), ("b", "c")}
    assert verify_coupling(coupling, s, c, d)


def test_tbisim_kripke_props_must_match():
    c = kripke_model({"x": []}, atoms=["p"], props={"x": ["p"]})
    d = kripke_model({"y": []}, atoms=["p"])
    s = relation(c.carrier, d.carrier, [("x", "y")])
    assert t_bisimulation_check(s, c, d) is None


def test_tbisim_isomorphism_graph():
    d1 = dist_model({"x": {"x": "1/2", "y": "1/2"}, "y": {"y": 1}})
    d2 = dist_model({"a": {"a": "1/2", "b": "1/2"}, "b": {"b": 1}})
    s = relation(d1.carrier, d2.carrier, [("x", "a"), ("y", "b")])
    coupling = t_bisimulation_check(s, d1, d2)
    assert coupling is not None and verify_coupling(coupling, s, d1, d2)


def test_tbisim_distribution_non_transportable():
    c = dist_model({"x": {"a": "1/2", "b": "1/2"}, "a": {"a": 1}, "b": {"b": 1}})
    d = dist_model({"y": {"c": 1}, "c": {"c": 1}})
    s = relation(c.carrier, d.carrier, [("x", "y"), ("a", "c")])
    assert t_bisimulation_check(s, c, d) is None


def test_tbisim_multiset_integer_flow():
    c = multiset_model({"x": {"u": 2}, "u": {}})
    d = multiset_model({"y": {"v": 1, "w": 1}, "v": {}, "w": {}})
    s = relation(
        c.carrier, d.carrier, [("x", "y"), ("u", "v"), ("u", "w")]
    )
    coupling = t_bisimulation_check(s, c, d)
    assert coupling is not None
    value = coupling.value_for(("x", "y"))
    assert value.weight(("u", "v")) + value.weight(("u", "w")) == 2
    assert verify_coupling(coupling, s, c, d)


def test_tbisim_multiset_rejects_infinite_weights():
    c = multiset_model({"x": {"x": INF}})
    s = identity_relation(c.carrier)
    with pytest.raises(InfiniteWeightError):
        t_bisimulation_check(s, c, c)


def test_tbisim_neighborhood_search_and_budget():
    c = nbhd_model({"x": [["x"]]})
    d = nbhd_model({"y": [["y"]]})
    s = relation(c.carrier, d.carrier, [("x", "y")])
    coupling = t_bisimulation_check(s, c, d)
    assert coupling is not None and verify_coupling(coupling, s, c, d)
    big_c = nbhd_model({f"x{i}": [] for i in range(6)})
    big_d = nbhd_model({f"y{i}": [] for i in range(6)})
    full = relation(
        big_c.carrier, big_d.carrier, [(f"x{i}", f"y{i}") for i in range(6)]
    )
    with pytest.raises(BudgetError):
        t_bisimulation_check(full, big_c, big_d)


def test_up_to_coupling_succeeds_whenever_plain_does():
    rng = random.Random(50)
    for seed in range(30):
        kind = (kripke_kind(("p",)), multiset_model({"u": {}}).kind, dist_model({"u": {"u": 1}}).kind)[seed % 3]
        c = generate_coalgebra(GeneratorConfig(seed=seed, kind=kind, max_states=4))
        d = generate_coalgebra(GeneratorConfig(seed=seed + 9, kind=kind, max_states=4))
        s = random_relation(rng, c, d, density=0.35)
        plain = t_bisimulation_check(s, c, d)
        if plain is not None:
            assert t_bisim_up_to_difunctionality_check(s, c, d) is not None


def test_up_to_coupling_needs_the_closure_chain():
    c = dist_model(
        {"x": {"a": "3/4", "b": "1/4"}, "a": {"a": 1}, "b": {"b": 1}}
    )
    d = dist_model(
        {"y": {"c1": "1/4", "c2": "3/4"}, "c1": {"c1": 1}, "c2": {"c2": 1}}
    )
    s = relation(
        c.carrier,
        d.carrier,
        [("x", "y"), ("a", "c1"), ("b", "c1"), ("b", "c2")],
    )
    assert t_bisimulation_check(s, c, d) is None
    coupling = t_bisim_up_to_difunctionality_check(s, c, d)
    assert coupling is not None
    value = coupling.value_for(("x", "y"))
    assert ("a", "c2") in dict(value.entries)  # mass routed through the closure


def test_coupling_success_implies_lambda_bisimulation():
    rng = random.Random(8)
    for seed in range(40):
        kind = (kripke_kind(("p",)), multiset_model({"u": {}}).kind, dist_model({"u": {"u": 1}}).kind)[seed % 3]
        c = generate_coalgebra(GeneratorConfig(seed=seed, kind=kind, max_states=4))
        d = generate_coalgebra(GeneratorConfig(seed=seed + 77, kind=kind, max_states=4))
        sig = auto_signature(c, d)
        s = random_relation(rng, c, d, density=0.4)
        if t_bisimulation_check(s, c, d) is not None:
            assert is_bisimulation(s, c, d, sig).holds
        if t_bisim_up_to_difunctionality_check(s, c, d) is not None:
            assert is_bisimulation_up_to_difunctionality(s, c, d, sig).holds


def test_difunctional_bisimulations_admit_couplings():
    for seed in range(30):
        kind = (kripke_kind(("p",)), multiset_model({"u": {}}).kind, dist_model({"u": {"u": 1}}).kind)[seed % 3]
        c = generate_coalgebra(GeneratorConfig(seed=seed, kind=kind, max_states=5))
        d = generate_coalgebra(GeneratorConfig(seed=seed + 5, kind=kind, max_states=5))
        sig = auto_signature(c, d)
        gb = greatest_bisimulation(c, d, sig)
        assert gb.is_difunctional()
        assert t_bisimulation_check(gb, c, d) is not None


def test_stabilized_partition_relation_is_a_bisimulation():
    for seed in range(16):
        kind = (kripke_kind(("p",)), multiset_model({"u": {}}).kind,
                dist_model({"u": {"u": 1}}).kind, nbhd_model({"u": []}).kind)[seed % 4]
        c = generate_coalgebra(GeneratorConfig(seed=seed, kind=kind, max_states=5))
        d = generate_coalgebra(GeneratorConfig(seed=seed + 41, kind=kind, max_states=5))
        sig = auto_signature(c, d)
        part, _ = stabilized_partition(c, d)
        assert is_bisimulation(part.cross_relation(), c, d, sig).holds


def test_successful_up_to_couplings_are_behaviourally_sound():
    rng = random.Random(31)
    witnessed = 0
    for seed in range(40):
        kind = (kripke_kind(("p",)), multiset_model({"u": {}}).kind,
                dist_model({"u": {"u": 1}}).kind)[seed % 3]
        c = generate_coalgebra(GeneratorConfig(seed=seed, kind=kind, max_states=4))
        d = generate_coalgebra(GeneratorConfig(seed=seed + 19, kind=kind, max_states=4))
        sig = auto_signature(c, d)
        candidates = [random_relation(rng, c, d, density=0.3)]
        gb = greatest_bisimulation(c, d, sig)
        candidates.append(gb)
        candidates.append(
            relation(c.carrier, d.carrier,
                     [p for p in gb.sorted_pairs() if rng.random() < 0.5])
        )
        for s in candidates:
            if t_bisim_up_to_difunctionality_check(s, c, d) is not None:
                witnessed += 1
                assert s.pairs <= behavioural_equivalence(c, d, sig).pairs
    assert witnessed >= 40  # the check is not vacuous


def test_feasible_transport_exactness():
    plan = feasible_transport(
        {"a": Fraction(3, 4), "b": Fraction(1, 4)},
        {"c": Fraction(1, 2), "d": Fraction(1, 2)},
        {("a", "c"), ("a", "d"), ("b", "d")},
    )
    assert plan is not None
    assert sum(plan.values()) == 1
    assert plan[("a", "c")] == Fraction(1, 2)
    assert feasible_transport({"a": 1}, {"c": 1}, set()) is None
    assert feasible_transport({"a": Fraction(1, 2)}, {"c": 1}, {("a", "c")}) is None
    assert feasible_transport({}, {}, set()) == {}
