"""The condpref command line.

Every subcommand writes one JSON document to standard output (or --out)
and keeps human-readable notes on standard error, so pipelines can
consume the JSON directly.  Exit codes: 0 on success, 1 when a checked
property fails (axiom violations, a non-representing table, axiom-check
violations, suite failures), 2 on usage and domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import jsonio
from .condcore import ConditionalSubset
from .errors import CondprefError
from .gaps import ConditionalIntervalSet, find_gaps, gap_normalize
from .generator import (
    InstanceSpec,
    PreferenceInstance,
    SplitMix64,
    VnmInstance,
    generate_interval_instance,
    generate_preference_instance,
    generate_vnm_instance,
    planted_mixture_triple,
    random_lottery,
    walk_museum_instance,
)
from .preference import RelationGraph, induced_graph, tri_partition, verify_axioms
from .representation import (
    FiniteCondTopology,
    WeightScheme,
    debreu_utility,
    rader_utility,
    verify_representation,
)
from .suites import SUITE_NAMES, run_suite, suite_report_to_json
from .vnm import (
    affine_equivalence,
    check_archimedean,
    check_independence,
    outcome_values,
    utility_index,
    validation_mismatches,
)

_VALIDATION_SALT = 0x9E6C63D0876A9A35


def _emit(data, out_path=None) -> None:
    text = jsonio.dumps(data)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {out_path}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _parse_values(text: str) -> tuple[int, int]:
    if ":" in text:
        lo, hi = text.split(":", 1)
        return int(lo), int(hi)
    n = int(text)
    return n, n


def _spec_from_args(args) -> InstanceSpec:
    return InstanceSpec(
        seed=args.seed,
        atoms=args.atoms,
        values_per_atom=_parse_values(args.values),
        tie_probability=Fraction(args.tie),
        lottery_outcomes=args.outcomes,
    )


def _load_preference(path) -> PreferenceInstance:
    instance = jsonio.load_instance(path)
    if not isinstance(instance, PreferenceInstance):
        raise CondprefError(f"{path} is not a preference instance")
    return instance


def _load_vnm(path) -> VnmInstance:
    instance = jsonio.load_instance(path)
    if not isinstance(instance, VnmInstance):
        raise CondprefError(f"{path} is not a planted-index instance")
    return instance


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_generate(args) -> int:
    if args.preset == "walk-museum":
        instance = walk_museum_instance()
    else:
        spec = _spec_from_args(args)
        makers = {
            "preference": generate_preference_instance,
            "vnm": generate_vnm_instance,
            "interval-set": generate_interval_instance,
        }
        instance = makers[args.kind](spec)
    _emit(jsonio.instance_to_json(instance), args.out)
    return 0


def _cmd_check_axioms(args) -> int:
    instance = jsonio.load_instance(args.file)
    if isinstance(instance, PreferenceInstance):
        graph = induced_graph(instance.preference, list(instance.acts.values()))
        ambient = instance.preference.ground_subset()
    elif isinstance(instance, RelationGraph):
        graph = instance
        algebra = graph.algebra
        ambient = ConditionalSubset(
            algebra,
            tuple(
                frozenset(e.value_at(i) for e in graph.elements())
                for i in range(algebra.size)
            ),
        )
    else:
        raise CondprefError(
            f"{args.file} holds neither a preference instance nor a relation graph"
        )
    report = verify_axioms(graph, ambient)
    _emit(jsonio.axiom_report_to_json(report), args.out)
    if report.satisfied:
        _note(f"axioms hold ({'exact' if report.exact else 'not exact'})")
        return 0
    _note(f"{len(report.violations)} axiom violation(s)")
    return 1


def _cmd_partition(args) -> int:
    instance = _load_preference(args.file)
    try:
        x = instance.acts[args.x]
        y = instance.acts[args.y]
    except KeyError as e:
        raise CondprefError(f"unknown act {e.args[0]!r}") from None
    t = tri_partition(instance.preference, x, y)
    _emit(jsonio.tri_partition_to_json(t), args.out)
    return 0


def _cmd_represent(args) -> int:
    instance = _load_preference(args.file)
    pref = instance.preference
    if args.method == "debreu":
        if args.weights:
            with open(args.weights, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
            weight_at = tuple(
                {
                    v: jsonio.fraction_from_str(q)
                    for v, q in raw[label].items()
                }
                for label in instance.algebra.labels
            )
            weights = WeightScheme(instance.algebra, weight_at)
        else:
            weights = instance.default_weights()
        table = debreu_utility(pref, weights)
    else:
        ambient = pref.ground_subset()
        topologies = {
            "trivial": lambda: FiniteCondTopology.trivial(ambient),
            "discrete": lambda: FiniteCondTopology.discrete(ambient),
            "lower-contours": lambda: FiniteCondTopology.lower_contours(pref),
        }
        topo = topologies[args.topology]()
        index_weights = [Fraction(1, 2 ** (n + 1)) for n in range(len(topo.base))]
        table = rader_utility(pref, topo, index_weights)
    report = verify_representation(table, pref)
    _emit(
        {
            "kind": "utility-table",
            "method": args.method,
            "atoms": list(instance.algebra.labels),
            "table": jsonio.utility_table_to_json(table),
            "verified": report.ok,
        },
        args.out,
    )
    if not report.ok:
        _note(f"representation check failed: {report.describe()}")
        return 1
    return 0


def _cmd_gap_normalize(args) -> int:
    instance = jsonio.load_instance(args.file)
    if not isinstance(instance, ConditionalIntervalSet):
        raise CondprefError(f"{args.file} is not an interval-set instance")
    g, image = gap_normalize(instance)
    labels = instance.algebra.labels
    data = {
        "kind": "gap-normalize",
        "atoms": list(labels),
        "map": {
            labels[i]: [
                {
                    "source": jsonio.interval_to_json(src),
                    "a": jsonio.fraction_to_str(a),
                    "b": jsonio.fraction_to_str(b),
                }
                for src, a, b in g.pieces[i]
            ]
            for i in range(len(labels))
        },
        "image": jsonio.interval_set_to_json(image),
        "gaps": [
            {
                "index": record.index,
                "shapes": {
                    labels[i]: record.shape_at(i) for i in sorted(record.intervals)
                },
            }
            for record in find_gaps(image)
        ],
    }
    _emit(data, args.out)
    return 0


def _cmd_vnm_extract(args) -> int:
    instance = _load_vnm(args.file)
    oracle = instance.oracle()
    recovered = utility_index(oracle, instance.algebra, instance.outcomes, args.bits)
    fit = affine_equivalence(
        outcome_values(instance.index), outcome_values(recovered), args.bits
    )
    seed = args.seed if args.seed is not None else (
        instance.spec.seed if instance.spec else 0
    )
    rng = SplitMix64(seed ^ _VALIDATION_SALT)
    pairs = [
        (
            random_lottery(rng, instance.algebra, instance.outcomes),
            random_lottery(rng, instance.algebra, instance.outcomes),
        )
        for _ in range(args.pairs)
    ]
    mismatches = validation_mismatches(oracle, recovered, pairs, args.bits)
    data = {
        "kind": "vnm-extract",
        "atoms": list(instance.algebra.labels),
        "outcomes": list(instance.outcomes),
        "recovered": jsonio.utility_index_to_json(recovered),
        "affine_fit": {
            "ok": fit.ok,
            "worst_deviation": jsonio.fraction_to_str(fit.worst_deviation),
            "reason": fit.reason,
        },
        "validation": {
            "pairs": len(pairs),
            "mismatches": [
                {"pair": k, "atom": label} for k, label in mismatches
            ],
        },
    }
    _emit(data, args.out)
    if fit.ok and not mismatches:
        _note(f"recovered index matches the oracle (worst deviation {fit.worst_deviation})")
        return 0
    _note("recovered index disagrees with the oracle")
    return 1


def _cmd_vnm_check(args) -> int:
    instance = _load_vnm(args.file)
    oracle = instance.oracle()
    rng = SplitMix64(args.seed ^ _VALIDATION_SALT)
    if args.axiom == "independence":
        samples = []
        for _ in range(args.samples):
            x = random_lottery(rng, instance.algebra, instance.outcomes)
            y = random_lottery(rng, instance.algebra, instance.outcomes)
            z = random_lottery(rng, instance.algebra, instance.outcomes)
            alpha = Fraction(rng.below(1023) + 1, 1024)
            samples.append((x, y, z, alpha))
        report = check_independence(oracle, samples)
        data = {
            "kind": "axiom-check",
            "axiom": "independence",
            "samples": report.samples_checked,
            "vacuous": report.vacuous,
            "ok": report.ok,
            "violations": [
                {"sample": v.sample_index, "lost_on": jsonio.event_to_json(v.lost_on)}
                for v in report.violations
            ],
        }
    else:
        triples = []
        while len(triples) < args.samples:
            x, y, z, alpha = planted_mixture_triple(rng, instance)
            if any(not 0 < a < 1 for a in alpha.values):
                continue
            triples.append((x, y, z))
        report = check_archimedean(oracle, triples, args.bits)
        data = {
            "kind": "axiom-check",
            "axiom": "archimedean",
            "samples": len(report.witnesses),
            "resolution_bits": report.resolution_bits,
            "ok": report.ok,
            "violations": [
                {"sample": w.sample_index}
                for w in report.witnesses
                if not w.found
            ],
        }
    _emit(data, args.out)
    if data["ok"]:
        _note(f"{args.axiom} holds on {args.samples} samples")
        return 0
    _note(f"{args.axiom} violated")
    return 1


def _cmd_suite(args) -> int:
    spec = _spec_from_args(args)
    report = run_suite(args.name, spec, args.trials)
    _emit(suite_report_to_json(report), args.out)
    status = "ok" if report.ok else f"{len(report.failures)} failure(s)"
    _note(
        f"suite {report.suite}: {report.trials} trials, {report.cases} cases, "
        f"{status} in {report.wall_time:.2f}s"
    )
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_spec_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="64-bit generator seed")
    p.add_argument("--atoms", type=int, default=3, help="number of atoms")
    p.add_argument(
        "--values",
        default="2:6",
        help="values (or components) per atom, N or LO:HI",
    )
    p.add_argument("--tie", default="3/10", help="tie probability as a rational p/q")
    p.add_argument("--outcomes", type=int, default=3, help="lottery outcomes (vnm)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="condpref",
        description="conditional preference orders: generation, checking, representation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a seeded instance file")
    p.add_argument("--kind", choices=("preference", "vnm", "interval-set"), default="preference")
    p.add_argument("--preset", choices=("walk-museum",), help="emit a fixed instance instead")
    _add_spec_flags(p)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("check-axioms", help="verify the preference axioms on a file")
    p.add_argument("file")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_check_axioms)

    p = sub.add_parser("partition", help="equivalent/strict events for two acts")
    p.add_argument("file")
    p.add_argument("--x", required=True, help="first act name")
    p.add_argument("--y", required=True, help="second act name")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_partition)

    p = sub.add_parser("represent", help="construct a representing utility table")
    p.add_argument("file")
    p.add_argument("--method", choices=("debreu", "rader"), default="debreu")
    p.add_argument("--weights", help="JSON file of per-atom value weights (debreu)")
    p.add_argument(
        "--topology",
        choices=("trivial", "discrete", "lower-contours"),
        default="lower-contours",
        help="base family for the rader method",
    )
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_represent)

    p = sub.add_parser("gap-normalize", help="repair the gaps of an interval set")
    p.add_argument("file")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_gap_normalize)

    vnm = sub.add_parser("vnm", help="lottery-preference operations")
    vnm_sub = vnm.add_subparsers(dest="vnm_command", required=True)

    p = vnm_sub.add_parser("extract", help="recover a utility index from the planted oracle")
    p.add_argument("file")
    p.add_argument("--bits", type=int, default=30, help="bisection steps")
    p.add_argument("--pairs", type=int, default=100, help="validation pairs")
    p.add_argument("--seed", type=int, default=None, help="validation sampling seed")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_vnm_extract)

    p = vnm_sub.add_parser("check", help="sample-test the mixture axioms")
    p.add_argument("file")
    p.add_argument("--axiom", choices=("independence", "archimedean"), required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bits", type=int, default=30)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_vnm_check)

    p = sub.add_parser("suite", help="run a property suite")
    p.add_argument("name", choices=SUITE_NAMES)
    p.add_argument("--trials", type=int, default=50)
    _add_spec_flags(p)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_suite)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (CondprefError, OSError, ValueError, KeyError) as e:
        # domain errors, unreadable files, and malformed instance documents
        # are all usage errors to the command line
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
