"""Command-line interface.

Exit codes: 0 when the queried property holds or a witness was found, 1 when
it fails or no witness exists, 2 on usage or validation errors.  Output is
deterministic byte for byte for identical invocations; `--json` switches
every command to a single machine-readable JSON document.
"""

from __future__ import annotations

import argparse
import sys

from .behaviour import (
    behavioural_equivalence,
    n_step_partition,
    quotient_witness,
    t_bisim_up_to_difunctionality_check,
    t_bisimulation_check,
)
from .errors import CoalsimError
from .formulas import parse_formula
from .liftings import DEFAULT_LITERALS, resolve_signature
from .modelio import (
    dump_json,
    load_coalgebra,
    load_relation,
    relation_to_dict,
)
from .properties import run_property_suite
from .relations import difunctional_closure
from .simulation import (
    greatest_bisimulation,
    greatest_n_bisimulation,
    greatest_simulation,
    is_bisimulation,
    is_bisimulation_up_to_difunctionality,
    is_n_bisimulation,
    is_n_simulation,
    n_simulation_chain,
)
from .formulas import evaluate


def _signature(args, *models):
    literal = args.sig or DEFAULT_LITERALS[models[0].kind.name]
    return resolve_signature(literal, models)


def _emit_relation(args, rel, header=None):
    if args.json:
        sys.stdout.write(dump_json(relation_to_dict(rel)))
    else:
        if header:
            print(header)
        for x, y in rel.sorted_pairs():
            print(f"{x} {y}")
    return 0 if rel.pairs else 1


def _emit_report(args, report):
    if args.json:
        sys.stdout.write(dump_json(report.to_dict()))
    else:
        print("holds" if report.holds else "fails")
        for v in report.violations:
            wit = ",".join(str(s) for s in sorted(v.witness, key=repr))
            print(
                f"violation [{v.direction}] {v.left} {v.right} "
                f"{v.modality.token()} {{{wit}}}"
            )
    return 0 if report.holds else 1


def _cmd_eval(args) -> int:
    model = load_coalgebra(args.model)
    sig = _signature(args, model)
    formula = parse_formula(args.formula, sig)
    result = evaluate(formula, model, args.state)
    if args.json:
        sys.stdout.write(dump_json({"state": args.state, "holds": result}))
    else:
        print("true" if result else "false")
    return 0 if result else 1


def _cmd_check_sim(args) -> int:
    c = load_coalgebra(args.left)
    d = load_coalgebra(args.right)
    rel = load_relation(args.relation, c, d)
    sig = _signature(args, c, d)
    if args.up_to_difunctional:
        report = is_bisimulation_up_to_difunctionality(rel, c, d, sig)
        return _emit_report(args, report)
    if args.n is not None:
        if args.bi:
            ok = is_n_bisimulation(rel, c, d, sig, args.n)
        else:
            ok = is_n_simulation(rel, c, d, sig, args.n)
        if args.json:
            sys.stdout.write(dump_json({"holds": ok, "depth": args.n}))
        else:
            print("holds" if ok else "fails")
        return 0 if ok else 1
    report = is_bisimulation(rel, c, d, sig) if args.bi else None
    if report is None:
        from .simulation import is_simulation

        report = is_simulation(rel, c, d, sig)
    return _emit_report(args, report)


def _cmd_greatest(args, bi: bool) -> int:
    c = load_coalgebra(args.left)
    d = load_coalgebra(args.right)
    sig = _signature(args, c, d)
    if args.n is not None:
        if bi:
            rel = greatest_n_bisimulation(c, d, sig, args.n)
        else:
            rel = n_simulation_chain(c, d, sig, args.n)[args.n]
    else:
        rel = greatest_bisimulation(c, d, sig) if bi else greatest_simulation(c, d, sig)
    return _emit_relation(args, rel)


def _cmd_nstep(args) -> int:
    c = load_coalgebra(args.left)
    d = load_coalgebra(args.right)
    part = n_step_partition(c, d, args.n)
    if args.json:
        doc = part.to_dict()
        doc["n"] = args.n
        sys.stdout.write(dump_json(doc))
    else:
        for i, blk in enumerate(part.blocks):
            left = [s for side, s in blk if side == "L"]
            right = [s for side, s in blk if side == "R"]
            print(f"block {i}: left={left} right={right}")
    return 0


def _cmd_behavioural(args) -> int:
    c = load_coalgebra(args.left)
    d = load_coalgebra(args.right)
    sig = _signature(args, c, d)
    rel = behavioural_equivalence(c, d, sig)
    if args.witness:
        witness = quotient_witness(rel, c, d)
        with open(args.witness, "w", encoding="utf-8") as handle:
            handle.write(dump_json(witness.to_dict()))
    return _emit_relation(args, rel)


def _cmd_closure(args) -> int:
    rel = load_relation(args.relation)
    closed = difunctional_closure(rel)
    if args.json:
        sys.stdout.write(dump_json(relation_to_dict(closed)))
    else:
        for x, y in closed.sorted_pairs():
            print(f"{x} {y}")
    return 0


def _cmd_tbisim(args) -> int:
    c = load_coalgebra(args.left)
    d = load_coalgebra(args.right)
    rel = load_relation(args.relation, c, d)
    check = (
        t_bisim_up_to_difunctionality_check
        if args.up_to_difunctional
        else t_bisimulation_check
    )
    coupling = check(rel, c, d)
    if args.json:
        doc = coupling.to_dict() if coupling is not None else {"couplings": None}
        sys.stdout.write(dump_json(doc))
    else:
        print("coupling found" if coupling is not None else "no coupling")
    return 0 if coupling is not None else 1


def _cmd_randtest(args) -> int:
    report = run_property_suite(args.property, args.trials, args.seed)
    if args.json:
        sys.stdout.write(dump_json(report.to_dict()))
    else:
        if report.asserting:
            status = "PASS" if report.passed else "FAIL"
        else:
            status = "NO FINDINGS" if report.passed else "FINDINGS"
        print(f"{report.name}: {status} ({report.trials} trials, "
              f"{len(report.counterexamples)} counterexamples)")
        for ce in report.counterexamples:
            sys.stdout.write(dump_json(ce))
    if not report.asserting:
        return 0
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coalsim",
        description="Decide simulations, bisimulations, and behavioural "
        "equivalence for finite state-based models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, sig=True):
        if sig:
            p.add_argument("--sig", help="signature literal, e.g. kripke:box,diamond,atoms")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("eval", help="evaluate a formula at a state")
    p.add_argument("model")
    p.add_argument("state")
    p.add_argument("formula")
    common(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("check-sim", help="check a relation file for (bi)simulation")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("relation")
    p.add_argument("--bi", action="store_true", help="check both directions")
    p.add_argument("--n", type=int, help="bounded depth n")
    p.add_argument(
        "--up-to-difunctional",
        action="store_true",
        help="bisimulation up to difunctional closure",
    )
    common(p)
    p.set_defaults(func=_cmd_check_sim)

    p = sub.add_parser("greatest-sim", help="compute the greatest simulation")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--n", type=int, help="greatest depth-n simulation instead")
    common(p)
    p.set_defaults(func=lambda a: _cmd_greatest(a, bi=False))

    p = sub.add_parser("greatest-bisim", help="compute the greatest bisimulation")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--n", type=int, help="greatest depth-n bisimulation instead")
    common(p)
    p.set_defaults(func=lambda a: _cmd_greatest(a, bi=True))

    p = sub.add_parser("nstep", help="depth-n partition of the disjoint union")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--n", type=int, required=True)
    common(p, sig=False)
    p.set_defaults(func=_cmd_nstep)

    p = sub.add_parser(
        "behavioural", help="behavioural equivalence with internal cross-checks"
    )
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--witness", help="write the quotient witness JSON here")
    common(p)
    p.set_defaults(func=_cmd_behavioural)

    p = sub.add_parser("closure", help="difunctional closure of a relation file")
    p.add_argument("relation")
    common(p, sig=False)
    p.set_defaults(func=_cmd_closure)

    p = sub.add_parser("tbisim", help="search for a coupling witnessing the relation")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("relation")
    p.add_argument(
        "--up-to-difunctional",
        action="store_true",
        help="couple over the difunctional closure",
    )
    common(p, sig=False)
    p.set_defaults(func=_cmd_tbisim)

    p = sub.add_parser("randtest", help="run a named property of the theorem matrix")
    p.add_argument("property")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    common(p, sig=False)
    p.set_defaults(func=_cmd_randtest)

    return parser


def cli_dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except CoalsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))
