"""JSON formats for instances, relation graphs, and CLI reports.

Conventions shared by every format: the "atoms" array fixes the algebra
and its atom order; events serialize as sorted arrays of atom labels;
rationals serialize as exact "p/q" strings ("p" when the denominator is
1); unbounded interval ends use the sentinels "inf" (no lower bound) and
"sup" (no upper bound).  Serialization is deterministic — sorted keys,
two-space indent, trailing newline — so a fixed seed reproduces a
byte-identical file.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping

from .condcore import ConditionalElement
from .errors import StructuralError
from .events import Event, EventAlgebra
from .gaps import ConditionalIntervalSet, RationalInterval
from .generator import InstanceSpec, PreferenceInstance, VnmInstance, _acts_over
from .preference import (
    AxiomReport,
    ConditionalPreference,
    RelationGraph,
    TriPartition,
    element_repr,
)
from .representation import UtilityTable
from .vnm import ConditionalLottery, UtilityIndex


def dumps(data: Mapping[str, Any]) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def fraction_to_str(q: Fraction) -> str:
    return str(Fraction(q))


def fraction_from_str(s: str) -> Fraction:
    return Fraction(str(s))


def event_to_json(event: Event) -> list[str]:
    return event.labels()


def event_from_json(algebra: EventAlgebra, labels) -> Event:
    return algebra.event(labels)


def _algebra_from_json(data: Mapping[str, Any]) -> EventAlgebra:
    atoms = data.get("atoms")
    if not isinstance(atoms, list) or not atoms:
        raise StructuralError('instance files need a nonempty "atoms" array')
    return EventAlgebra(tuple(atoms))


def _require_kind(data: Mapping[str, Any], kind: str) -> None:
    if data.get("kind") != kind:
        raise StructuralError(f'expected a file of kind {kind!r}, got {data.get("kind")!r}')


def spec_to_json(spec: InstanceSpec) -> dict[str, Any]:
    return {
        "seed": spec.seed,
        "atoms": spec.atoms,
        "values_per_atom": list(spec.values_per_atom),
        "tie_probability": fraction_to_str(spec.tie_probability),
        "lottery_outcomes": spec.lottery_outcomes,
    }


def spec_from_json(data: Mapping[str, Any]) -> InstanceSpec:
    return InstanceSpec(
        seed=int(data["seed"]),
        atoms=int(data["atoms"]),
        values_per_atom=tuple(data["values_per_atom"]),
        tie_probability=fraction_from_str(data["tie_probability"]),
        lottery_outcomes=int(data["lottery_outcomes"]),
    )


# ---------------------------------------------------------------------------
# elements and lotteries
# ---------------------------------------------------------------------------


def element_to_json(x: ConditionalElement) -> dict[str, Any]:
    return {x.algebra.labels[i]: v for i, v in x.as_dict().items()}


def element_from_json(algebra: EventAlgebra, data: Mapping[str, Any]) -> ConditionalElement:
    index_of = {label: i for i, label in enumerate(algebra.labels)}
    try:
        assignment = {index_of[label]: v for label, v in data.items()}
    except KeyError as e:
        raise StructuralError(f"unknown atom label {e.args[0]!r} in element") from None
    return ConditionalElement.from_map(algebra, assignment)


def lottery_to_json(mu: ConditionalLottery) -> dict[str, Any]:
    return {
        "outcomes": list(mu.outcomes),
        "pmf": {
            mu.algebra.labels[i]: [fraction_to_str(m) for m in mu.pmf[i]]
            for i in range(mu.algebra.size)
        },
    }


def lottery_from_json(algebra: EventAlgebra, data: Mapping[str, Any]) -> ConditionalLottery:
    outcomes = tuple(data["outcomes"])
    pmf = tuple(
        tuple(fraction_from_str(m) for m in data["pmf"][label])
        for label in algebra.labels
    )
    return ConditionalLottery(algebra, outcomes, pmf)


# ---------------------------------------------------------------------------
# preference instances and relation graphs
# ---------------------------------------------------------------------------


def preference_instance_to_json(inst: PreferenceInstance) -> dict[str, Any]:
    labels = inst.algebra.labels
    data: dict[str, Any] = {
        "kind": "preference",
        "atoms": list(labels),
        "values": {labels[i]: list(inst.ground[i]) for i in range(len(labels))},
        "ranking": {
            labels[i]: [sorted(g) for g in inst.preference.groups[i]]
            for i in range(len(labels))
        },
        "acts": {name: element_to_json(x) for name, x in inst.acts.items()},
    }
    if inst.spec is not None:
        data["spec"] = spec_to_json(inst.spec)
    return data


def preference_instance_from_json(data: Mapping[str, Any]) -> PreferenceInstance:
    _require_kind(data, "preference")
    algebra = _algebra_from_json(data)
    ground = tuple(tuple(data["values"][label]) for label in algebra.labels)
    rankings = {
        i: [list(g) for g in data["ranking"][label]]
        for i, label in enumerate(algebra.labels)
    }
    preference = ConditionalPreference.from_rankings(algebra, rankings)
    acts_data = data.get("acts", {})
    acts = {name: element_from_json(algebra, x) for name, x in acts_data.items()}
    if not acts:
        acts = _acts_over(algebra, ground)
    spec = spec_from_json(data["spec"]) if "spec" in data else None
    return PreferenceInstance(algebra, ground, preference, acts, spec)


def relation_graph_to_json(graph: RelationGraph) -> dict[str, Any]:
    return {
        "kind": "relation-graph",
        "atoms": list(graph.algebra.labels),
        "assertions": [
            {
                "x": element_to_json(x),
                "y": element_to_json(y),
                "event": event_to_json(event),
            }
            for x, y, event in graph.assertions
        ],
    }


def relation_graph_from_json(data: Mapping[str, Any]) -> RelationGraph:
    _require_kind(data, "relation-graph")
    algebra = _algebra_from_json(data)
    assertions = tuple(
        (
            element_from_json(algebra, item["x"]),
            element_from_json(algebra, item["y"]),
            event_from_json(algebra, item["event"]),
        )
        for item in data["assertions"]
    )
    return RelationGraph(assertions)


# ---------------------------------------------------------------------------
# planted utility indices
# ---------------------------------------------------------------------------


def vnm_instance_to_json(inst: VnmInstance) -> dict[str, Any]:
    labels = inst.algebra.labels
    data: dict[str, Any] = {
        "kind": "vnm",
        "atoms": list(labels),
        "outcomes": list(inst.outcomes),
        "index": {
            labels[i]: {
                o: fraction_to_str(inst.index.u[i][k])
                for k, o in enumerate(inst.outcomes)
            }
            for i in range(len(labels))
        },
    }
    if inst.spec is not None:
        data["spec"] = spec_to_json(inst.spec)
    return data


def vnm_instance_from_json(data: Mapping[str, Any]) -> VnmInstance:
    _require_kind(data, "vnm")
    algebra = _algebra_from_json(data)
    outcomes = tuple(data["outcomes"])
    rows = tuple(
        tuple(fraction_from_str(data["index"][label][o]) for o in outcomes)
        for label in algebra.labels
    )
    spec = spec_from_json(data["spec"]) if "spec" in data else None
    return VnmInstance(UtilityIndex(algebra, outcomes, rows), spec)


def utility_index_to_json(index: UtilityIndex) -> dict[str, Any]:
    labels = index.algebra.labels
    return {
        labels[i]: {o: fraction_to_str(index.u[i][k]) for k, o in enumerate(index.outcomes)}
        for i in range(len(labels))
    }


# ---------------------------------------------------------------------------
# interval sets
# ---------------------------------------------------------------------------


def interval_to_json(iv: RationalInterval) -> dict[str, Any]:
    return {
        "lo": "inf" if iv.lo is None else fraction_to_str(iv.lo),
        "hi": "sup" if iv.hi is None else fraction_to_str(iv.hi),
        "lo_closed": iv.lo_closed,
        "hi_closed": iv.hi_closed,
    }


def interval_from_json(data: Mapping[str, Any]) -> RationalInterval:
    lo = None if data["lo"] == "inf" else fraction_from_str(data["lo"])
    hi = None if data["hi"] == "sup" else fraction_from_str(data["hi"])
    return RationalInterval(lo, hi, bool(data["lo_closed"]), bool(data["hi_closed"]))


def interval_set_to_json(s: ConditionalIntervalSet) -> dict[str, Any]:
    labels = s.algebra.labels
    return {
        "kind": "interval-set",
        "atoms": list(labels),
        "components": {
            labels[i]: [interval_to_json(iv) for iv in s.components[i]]
            for i in range(len(labels))
        },
    }


def interval_set_from_json(data: Mapping[str, Any]) -> ConditionalIntervalSet:
    _require_kind(data, "interval-set")
    algebra = _algebra_from_json(data)
    components = tuple(
        tuple(interval_from_json(item) for item in data["components"].get(label, []))
        for label in algebra.labels
    )
    return ConditionalIntervalSet(algebra, components)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def tri_partition_to_json(t: TriPartition) -> dict[str, Any]:
    return {
        "kind": "tri-partition",
        "equiv": event_to_json(t.equiv),
        "strict_first": event_to_json(t.strict_first),
        "strict_second": event_to_json(t.strict_second),
    }


def axiom_report_to_json(report: AxiomReport) -> dict[str, Any]:
    return {
        "kind": "axiom-report",
        "satisfied": report.satisfied,
        "exact": report.exact,
        "note": report.note,
        "violations": [
            {
                "axiom": v.axiom,
                "x": element_repr(v.x),
                "y": element_repr(v.y) if v.y is not None else None,
                "event": event_to_json(v.event) if v.event is not None else None,
            }
            for v in report.violations
        ],
    }


def utility_table_to_json(table: UtilityTable) -> dict[str, Any]:
    labels = table.algebra.labels
    return {
        labels[i]: {
            v: fraction_to_str(q) for v, q in sorted(table.tables[i].items())
        }
        for i in range(len(labels))
    }


# ---------------------------------------------------------------------------
# top-level dispatch
# ---------------------------------------------------------------------------


def instance_to_json(instance) -> dict[str, Any]:
    if isinstance(instance, PreferenceInstance):
        return preference_instance_to_json(instance)
    if isinstance(instance, VnmInstance):
        return vnm_instance_to_json(instance)
    if isinstance(instance, ConditionalIntervalSet):
        return interval_set_to_json(instance)
    if isinstance(instance, RelationGraph):
        return relation_graph_to_json(instance)
    raise StructuralError(f"cannot serialize {type(instance).__name__}")


def instance_from_json(data: Mapping[str, Any]):
    kind = data.get("kind")
    loaders = {
        "preference": preference_instance_from_json,
        "vnm": vnm_instance_from_json,
        "interval-set": interval_set_from_json,
        "relation-graph": relation_graph_from_json,
    }
    if kind not in loaders:
        raise StructuralError(f"unknown instance kind {kind!r}")
    return loaders[kind](data)


def load_instance(path):
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_json(json.load(fh))
