"""Oracle-backed verification suites with shrinking witnesses.

Each suite draws seeded instances, checks one family of properties, and
reports failures with minimized witnesses.  A witness is shrunk first by
projecting everything onto a single atom, then by discarding values,
assertions, or components; a shrink step is accepted only when the
smaller candidate fails for the same reason as the original, so minimized
witnesses always still fail the property they were minimized for.

Corruption hooks exist for testing the suites themselves: run_suite
accepts a pure tamper function applied to one trial's artifact before
checking.  The corrupt_* helpers below are deterministic corruptions that
provably break their suite's property, so a healthy suite must flag
exactly the tampered trial.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Callable, Sequence

from .condcore import (
    ConditionalElement,
    ConditionalRational,
    ConditionalSubset,
    cond_complement,
    cond_intersection,
    cond_union,
)
from .errors import CondprefError, ConfigurationError
from .events import Event, EventAlgebra
from .gaps import (
    ConditionalIntervalSet,
    RationalInterval,
    find_gaps,
    gap_normalize,
    interval_set_of_points,
    usc_upgrade,
)
from .generator import (
    InstanceSpec,
    PreferenceInstance,
    SplitMix64,
    VnmInstance,
    generate_interval_instance,
    generate_preference_instance,
    generate_vnm_instance,
    random_lottery,
)
from .jsonio import (
    interval_set_to_json,
    interval_to_json,
    relation_graph_to_json,
    utility_table_to_json,
)
from .preference import (
    ConditionalPreference,
    RelationGraph,
    induced_graph,
    verify_axioms,
)
from .representation import UtilityTable, WeightScheme, debreu_utility, verify_representation
from .vnm import (
    UtilityIndex,
    affine_equivalence,
    outcome_values,
    utility_index,
    validation_mismatches,
)

SUITE_NAMES = (
    "boolean-laws",
    "axioms",
    "representation",
    "gap-shapes",
    "vnm-recovery",
    "usc-upgrade",
)

_STREAM_SALT = 0xD1B54A32D192ED03


@dataclass(frozen=True)
class SuiteFailure:
    trial: int
    seed: int
    reason: str
    detail: str
    witness: dict[str, Any]


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    trials: int
    cases: int
    failures: tuple[SuiteFailure, ...]
    wall_time: float

    @property
    def ok(self) -> bool:
        return not self.failures


def suite_report_to_json(report: SuiteReport) -> dict[str, Any]:
    return {
        "kind": "suite-report",
        "suite": report.suite,
        "trials": report.trials,
        "cases": report.cases,
        "ok": report.ok,
        "wall_time": round(report.wall_time, 6),
        "failures": [
            {
                "trial": f.trial,
                "seed": f.seed,
                "reason": f.reason,
                "detail": f.detail,
                "witness": f.witness,
            }
            for f in report.failures
        ],
    }


def run_suite(
    name: str,
    spec: InstanceSpec,
    trials: int,
    tamper: Callable | None = None,
    tamper_trial: int = 0,
) -> SuiteReport:
    """Run a named suite; tamper corrupts one trial's artifact if given."""
    if name not in SUITE_NAMES:
        raise ConfigurationError(
            f"unknown suite {name!r}; choose one of {', '.join(SUITE_NAMES)}"
        )
    if trials < 1:
        raise ConfigurationError("trials must be at least 1")
    runner = _RUNNERS[name]
    start = time.perf_counter()
    stream = SplitMix64(spec.seed)
    cases = 0
    failures: list[SuiteFailure] = []
    for t in range(trials):
        seed_t = stream.next_u64()
        sub = replace(spec, seed=seed_t)
        hook = tamper if (tamper is not None and t == tamper_trial) else None
        n, found = runner(sub, hook)
        cases += n
        for reason, detail, witness in found:
            failures.append(SuiteFailure(t, seed_t, reason, detail, witness))
    return SuiteReport(name, trials, cases, tuple(failures), time.perf_counter() - start)


# ---------------------------------------------------------------------------
# boolean-laws
# ---------------------------------------------------------------------------


def _subset_to_json(s: ConditionalSubset) -> dict[str, Any]:
    return {
        s.algebra.labels[i]: sorted(s.sets[i]) for i in range(s.algebra.size)
    }


def _random_subset(
    rng: SplitMix64, ambient: ConditionalSubset, live_all: bool = False
) -> ConditionalSubset:
    sets = []
    for i in range(ambient.algebra.size):
        pool = sorted(ambient.sets[i])
        if not live_all and rng.bernoulli(Fraction(1, 6)):
            sets.append(frozenset())
            continue
        sets.append(frozenset(v for v in pool if rng.bernoulli(Fraction(1, 2))))
    return ConditionalSubset(ambient.algebra, tuple(sets))


_BOOLEAN_LAWS: tuple[tuple[str, Callable], ...] = (
    (
        "double-complement",
        lambda y, z, w, amb, comp: (comp(comp(y)), y),
    ),
    (
        "de-morgan-union",
        lambda y, z, w, amb, comp: (
            comp(cond_union(y, z)),
            cond_intersection(comp(y), comp(z)),
        ),
    ),
    (
        "de-morgan-intersection",
        lambda y, z, w, amb, comp: (
            comp(cond_intersection(y, z)),
            cond_union(comp(y), comp(z)),
        ),
    ),
    (
        "distribute-meet-over-join",
        lambda y, z, w, amb, comp: (
            cond_intersection(y, cond_union(z, w)),
            cond_union(cond_intersection(y, z), cond_intersection(y, w)),
        ),
    ),
    (
        "distribute-join-over-meet",
        lambda y, z, w, amb, comp: (
            cond_union(y, cond_intersection(z, w)),
            cond_intersection(cond_union(y, z), cond_union(y, w)),
        ),
    ),
    (
        "absorption",
        lambda y, z, w, amb, comp: (cond_union(y, cond_intersection(y, z)), y),
    ),
    (
        "excluded-middle",
        lambda y, z, w, amb, comp: (cond_union(y, comp(y)), amb),
    ),
)


def _boolean_reason(y, z, w, ambient, comp) -> tuple[str, str, ConditionalSubset, ConditionalSubset] | None:
    for law, build in _BOOLEAN_LAWS:
        try:
            lhs, rhs = build(y, z, w, ambient, comp)
        except CondprefError as e:
            return f"error:{type(e).__name__}", str(e), y, z
        if lhs.sets != rhs.sets:
            return law, f"{law} fails", lhs, rhs
    return None


def _restrict_subset(s: ConditionalSubset, atom_index: int, sub: EventAlgebra) -> ConditionalSubset:
    return ConditionalSubset(sub, (s.sets[atom_index],))


def _run_boolean(spec: InstanceSpec, tamper) -> tuple[int, list]:
    rng = SplitMix64(spec.seed ^ _STREAM_SALT)
    algebra = EventAlgebra(tuple(f"a{i+1}" for i in range(spec.atoms)))
    lo, hi = spec.values_per_atom
    ambient = ConditionalSubset(
        algebra,
        tuple(
            frozenset(f"g{k+1}" for k in range(rng.randint(lo, hi)))
            for _ in range(algebra.size)
        ),
    )

    def comp(s: ConditionalSubset) -> ConditionalSubset:
        out = cond_complement(s, ambient)
        return tamper(out) if tamper else out

    y = _random_subset(rng, ambient)
    z = _random_subset(rng, ambient)
    w = _random_subset(rng, ambient)
    found = []
    reason = _boolean_reason(y, z, w, ambient, comp)
    if reason is not None:
        key, detail, lhs, rhs = reason
        y, z, w, ambient2, lhs, rhs = _shrink_boolean(y, z, w, ambient, tamper, key)
        found.append(
            (
                key,
                detail,
                {
                    "y": _subset_to_json(y),
                    "z": _subset_to_json(z),
                    "w": _subset_to_json(w),
                    "ambient": _subset_to_json(ambient2),
                    "lhs": _subset_to_json(lhs),
                    "rhs": _subset_to_json(rhs),
                },
            )
        )
    return len(_BOOLEAN_LAWS), found


def _shrink_boolean(y, z, w, ambient, tamper, key):
    def still_fails(y2, z2, w2, amb2):
        def comp2(s):
            out = cond_complement(s, amb2)
            return tamper(out) if tamper else out

        r = _boolean_reason(y2, z2, w2, amb2, comp2)
        return r if r is not None and r[0] == key else None

    # atoms first
    for i in range(ambient.algebra.size):
        sub = EventAlgebra((ambient.algebra.labels[i],))
        cand = tuple(_restrict_subset(s, i, sub) for s in (y, z, w, ambient))
        if still_fails(*cand):
            y, z, w, ambient = cand
            break
    # then ground values, dropped from the ambient set and every subset
    changed = True
    while changed:
        changed = False
        for i in range(ambient.algebra.size):
            for v in sorted(ambient.sets[i]):
                def drop(s: ConditionalSubset) -> ConditionalSubset:
                    sets = list(s.sets)
                    sets[i] = sets[i] - {v}
                    return ConditionalSubset(s.algebra, tuple(sets))

                cand = (drop(y), drop(z), drop(w), drop(ambient))
                if still_fails(*cand):
                    y, z, w, ambient = cand
                    changed = True
                    break
            if changed:
                break
    final = still_fails(y, z, w, ambient)
    assert final is not None
    return y, z, w, ambient, final[2], final[3]


def corrupt_drop_member(s: ConditionalSubset) -> ConditionalSubset:
    """Remove the smallest member at the first living atom; breaks complements."""
    for i in range(s.algebra.size):
        if s.sets[i]:
            sets = list(s.sets)
            sets[i] = sets[i] - {min(sets[i])}
            return ConditionalSubset(s.algebra, tuple(sets))
    return s


# ---------------------------------------------------------------------------
# axioms
# ---------------------------------------------------------------------------


def _axioms_reason(graph: RelationGraph, pref: ConditionalPreference) -> tuple[str, str] | None:
    try:
        report = verify_axioms(graph, pref.ground_subset())
    except CondprefError as e:
        return f"error:{type(e).__name__}", str(e)
    if report.violations:
        v = report.violations[0]
        return f"axiom:{v.axiom}", v.describe()
    if not report.exact:
        return "not-exact", report.note
    if report.induced_preference != pref:
        return "wrong-preference", "assertions reconstruct a different ranking"
    return None


def _axioms_still_fails(graph: RelationGraph, pref: ConditionalPreference, key: str) -> bool:
    """Whether the original failure kind is still present.

    For axiom keys the candidate may pick up additional violations while
    shrinking (dropping assertions loses reflexivity, for instance); the
    shrink is sound as long as the recorded axiom itself stays violated.
    """
    if key.startswith("axiom:"):
        try:
            report = verify_axioms(graph, pref.ground_subset())
        except CondprefError:
            return False
        wanted = key.split(":", 1)[1]
        return any(v.axiom == wanted for v in report.violations)
    r = _axioms_reason(graph, pref)
    return r is not None and r[0] == key


def _project_element(x: ConditionalElement, atom_index: int, sub: EventAlgebra) -> ConditionalElement:
    return ConditionalElement(sub.omega, (x.value_at(atom_index),))


def _project_axioms(
    graph: RelationGraph, pref: ConditionalPreference, atom_index: int
) -> tuple[RelationGraph | None, ConditionalPreference]:
    sub = EventAlgebra((graph.algebra.labels[atom_index],))
    sub_pref = ConditionalPreference(
        sub, (pref.groups[atom_index],), allow_trivial=True
    )
    assertions = []
    seen = set()
    for x, y, event in graph.assertions:
        if atom_index in event:
            px = _project_element(x, atom_index, sub)
            py = _project_element(y, atom_index, sub)
            key = (px.values, py.values)
            if key not in seen:
                seen.add(key)
                assertions.append((px, py, sub.omega))
    if not assertions:
        return None, sub_pref
    return RelationGraph(tuple(assertions)), sub_pref


def _shrink_axioms(graph, pref, key):
    for i in range(graph.algebra.size):
        pg, pp = _project_axioms(graph, pref, i)
        if pg is not None and _axioms_still_fails(pg, pp, key):
            graph, pref = pg, pp
            break
    changed = True
    while changed:
        changed = False
        if len(graph.assertions) <= 1:
            break
        for j in range(len(graph.assertions)):
            cand_assertions = graph.assertions[:j] + graph.assertions[j + 1 :]
            cand = RelationGraph(cand_assertions)
            if _axioms_still_fails(cand, pref, key):
                graph = cand
                changed = True
                break
    return graph, pref


def _ranking_json(pref: ConditionalPreference) -> dict[str, Any]:
    return {
        pref.algebra.labels[i]: [sorted(g) for g in pref.groups[i]]
        for i in range(pref.algebra.size)
    }


def _run_axioms(spec: InstanceSpec, tamper) -> tuple[int, list]:
    inst = generate_preference_instance(spec)
    graph = induced_graph(inst.preference, list(inst.acts.values()))
    if tamper:
        graph = tamper(graph)
    found = []
    reason = _axioms_reason(graph, inst.preference)
    if reason is not None:
        key, detail = reason
        small_graph, small_pref = _shrink_axioms(graph, inst.preference, key)
        found.append(
            (
                key,
                detail,
                {
                    "graph": relation_graph_to_json(small_graph),
                    "expected_ranking": _ranking_json(small_pref),
                },
            )
        )
    return 1, found


def corrupt_swap_assertion(graph: RelationGraph) -> RelationGraph:
    """Reverse the first one-way assertion; the graph then reads as a
    different ranking (or stops being closed), which the suite must flag."""
    asserted = {(x.values, y.values, e.mask) for x, y, e in graph.assertions}
    for k, (x, y, event) in enumerate(graph.assertions):
        if x.values != y.values and (y.values, x.values, event.mask) not in asserted:
            swapped = (y, x, event)
            return RelationGraph(
                graph.assertions[:k] + (swapped,) + graph.assertions[k + 1 :]
            )
    raise ConfigurationError("graph has no one-way assertion to swap")


# ---------------------------------------------------------------------------
# representation
# ---------------------------------------------------------------------------


def _representation_reason(
    table: UtilityTable, pref: ConditionalPreference, weights: WeightScheme | None
) -> tuple[str, str, tuple] | None:
    report = verify_representation(table, pref)
    if not report.ok:
        atom_label, v, w, direction = report.counterexample
        return (
            "order-mismatch",
            f"at atom {atom_label!r}: {direction} for values {v!r}, {w!r}",
            report.counterexample,
        )
    if weights is not None:
        for i in range(pref.algebra.size):
            floor = weights.min_weight_at(i)
            ground = sorted(pref.ground_at(i))
            for v in ground:
                for w in ground:
                    if pref.rank_at(i, v) < pref.rank_at(i, w):
                        gap = table.value_at(i, v) - table.value_at(i, w)
                        if gap < floor:
                            return (
                                "strict-gap",
                                f"utility gap {gap} below the minimum weight "
                                f"{floor} at atom {pref.algebra.labels[i]!r}",
                                (pref.algebra.labels[i], v, w, "strict-gap"),
                            )
    return None


def _shrink_representation(table, pref, weights, key, counterexample):
    atom_label, v, w, _ = counterexample
    i = pref.algebra.labels.index(atom_label)
    sub = EventAlgebra((atom_label,))
    keep = {v, w}
    groups = tuple(
        frozenset(g & keep) for g in pref.groups[i] if g & keep
    )
    sub_pref = ConditionalPreference(sub, (groups,), allow_trivial=True)
    sub_table = UtilityTable(
        sub, ({u: table.tables[i][u] for u in sorted(keep)},)
    )
    sub_weights = (
        WeightScheme(sub, ({u: weights.weight_at[i][u] for u in sorted(keep)},))
        if weights is not None
        else None
    )
    r = _representation_reason(sub_table, sub_pref, sub_weights)
    if r is not None and r[0] == key:
        return sub_table, sub_pref
    # the pair alone does not witness it (e.g. a gap via a third value);
    # fall back to the single-atom projection with all values
    full_groups = pref.groups[i]
    sub_pref = ConditionalPreference(sub, (full_groups,), allow_trivial=True)
    sub_table = UtilityTable(sub, (dict(table.tables[i]),))
    return sub_table, sub_pref


def _run_representation(spec: InstanceSpec, tamper) -> tuple[int, list]:
    inst = generate_preference_instance(spec)
    weights = inst.default_weights()
    table = debreu_utility(inst.preference, weights)
    if tamper:
        table = tamper(table)
    found = []
    reason = _representation_reason(table, inst.preference, weights)
    if reason is not None:
        key, detail, counterexample = reason
        small_table, small_pref = _shrink_representation(
            table, inst.preference, weights, key, counterexample
        )
        found.append(
            (
                key,
                detail,
                {
                    "ranking": _ranking_json(small_pref),
                    "table": utility_table_to_json(small_table),
                },
            )
        )
    return 1, found


def corrupt_swap_utilities(table: UtilityTable) -> UtilityTable:
    """Swap the utilities of the extreme values at the first atom where the
    table is not constant; guaranteed to contradict any represented order."""
    for i, t in enumerate(table.tables):
        if len(set(t.values())) >= 2:
            hi = max(sorted(t), key=lambda v: t[v])
            lo = min(sorted(t), key=lambda v: t[v])
            tables = list(table.tables)
            swapped = dict(t)
            swapped[hi], swapped[lo] = swapped[lo], swapped[hi]
            tables[i] = swapped
            return UtilityTable(table.algebra, tuple(tables))
    raise ConfigurationError("table is constant everywhere; nothing to swap")


def corrupt_shrink_gap(table: UtilityTable) -> UtilityTable:
    """Pull the two best utilities together below any positive weight floor,
    keeping their order: breaks the strict-gap bound, not the order."""
    for i, t in enumerate(table.tables):
        values = sorted(t, key=lambda v: (t[v], v))
        if len(set(t.values())) >= 2:
            hi = values[-1]
            second = max(t[v] for v in values if t[v] < t[hi])
            tables = list(table.tables)
            bumped = dict(t)
            bumped[hi] = second + Fraction(1, 2**40)
            tables[i] = bumped
            return UtilityTable(table.algebra, tuple(tables))
    raise ConfigurationError("table is constant everywhere; nothing to shrink")


# ---------------------------------------------------------------------------
# gap-shapes
# ---------------------------------------------------------------------------


def _gap_shape_reason(image: ConditionalIntervalSet) -> tuple[str, str, tuple] | None:
    for record in find_gaps(image):
        for i in sorted(record.intervals):
            shape = record.shape_at(i)
            if shape not in ("singleton", "open"):
                return (
                    "bad-gap-shape",
                    f"gap {record.index} at atom {image.algebra.labels[i]!r} "
                    f"is {shape}: {record.intervals[i]!r}",
                    (record.index, i),
                )
    return None


def _sample_domain_points(rng: SplitMix64, comps, count: int) -> list[Fraction]:
    points = []
    for _ in range(count):
        iv = comps[rng.below(len(comps))]
        if iv.is_point:
            points.append(iv.lo)
            continue
        lo = iv.lo if iv.lo_closed else iv.lo + Fraction(1, 64)
        hi = iv.hi if iv.hi_closed else iv.hi - Fraction(1, 64)
        t = Fraction(rng.below(65), 64)
        points.append(lo + (hi - lo) * t)
    return points


def _run_gap_shapes(spec: InstanceSpec, tamper) -> tuple[int, list]:
    s = generate_interval_instance(spec)
    g, image = gap_normalize(s)
    if tamper:
        image = tamper(image)
    found = []
    reason = _gap_shape_reason(image)
    cases = 1
    if reason is not None:
        key, detail, (gap_index, atom_index) = reason
        small = _shrink_gap_shapes(image, key, gap_index, atom_index)
        found.append((key, detail, {"image": interval_set_to_json(small)}))
    else:
        # monotonicity of the repair map on sampled ordered pairs
        rng = SplitMix64(spec.seed ^ _STREAM_SALT)
        for i, comps in enumerate(s.components):
            if not comps:
                continue
            pts = sorted(set(_sample_domain_points(rng, comps, 24)))
            cases += len(pts) - 1
            for p, q in zip(pts, pts[1:]):
                if not g.apply(i, p) < g.apply(i, q):
                    found.append(
                        (
                            "not-monotone",
                            f"g({p}) >= g({q}) at atom {s.algebra.labels[i]!r}",
                            {
                                "atom": s.algebra.labels[i],
                                "pair": [str(p), str(q)],
                                "source": interval_set_to_json(s),
                            },
                        )
                    )
                    break
    return cases, found


def _shrink_gap_shapes(image, key, gap_index, atom_index):
    sub = EventAlgebra((image.algebra.labels[atom_index],))
    comps = image.components[atom_index]
    cand = ConditionalIntervalSet(
        sub, (tuple(comps[gap_index : gap_index + 2]),)
    )
    r = _gap_shape_reason(cand)
    if r is not None and r[0] == key:
        return cand
    return ConditionalIntervalSet(sub, (comps,))


def corrupt_flip_gap_flag(image: ConditionalIntervalSet) -> ConditionalIntervalSet:
    """Close one open end facing a gap, making that gap half-closed."""
    for i, comps in enumerate(image.components):
        for j in range(len(comps) - 1):
            iv = comps[j]
            if not iv.hi_closed and not iv.is_point and comps[j + 1].lo_value > iv.hi_value:
                fixed = RationalInterval(iv.lo, iv.hi, iv.lo_closed, True)
                per_atom = list(image.components)
                per_atom[i] = comps[:j] + (fixed,) + comps[j + 1 :]
                return ConditionalIntervalSet(image.algebra, tuple(per_atom))
    # no open upper end next to a gap; open one that is closed instead
    for i, comps in enumerate(image.components):
        for j in range(len(comps) - 1):
            iv = comps[j]
            if iv.hi_closed and not iv.is_point:
                fixed = RationalInterval(iv.lo, iv.hi, iv.lo_closed, False)
                per_atom = list(image.components)
                per_atom[i] = comps[:j] + (fixed,) + comps[j + 1 :]
                return ConditionalIntervalSet(image.algebra, tuple(per_atom))
    raise ConfigurationError("image has no interior gap to corrupt")


# ---------------------------------------------------------------------------
# vnm-recovery
# ---------------------------------------------------------------------------

_SUITE_BITS = 20


def _vnm_reason(instance, recovered: UtilityIndex, bits: int, seed: int):
    fit = affine_equivalence(
        outcome_values(instance.index), outcome_values(recovered), bits
    )
    if not fit.ok:
        return "affine-fit", fit.reason, fit
    oracle = instance.oracle()
    rng = SplitMix64(seed ^ _STREAM_SALT)
    pairs = [
        (
            random_lottery(rng, instance.algebra, instance.outcomes),
            random_lottery(rng, instance.algebra, instance.outcomes),
        )
        for _ in range(20)
    ]
    bad = validation_mismatches(oracle, recovered, pairs, bits)
    if bad:
        k, label = bad[0]
        return "sign-mismatch", f"pair {k} disagrees at atom {label!r}", bad
    return None


def _project_index(index: UtilityIndex, atom_index: int) -> UtilityIndex:
    sub = EventAlgebra((index.algebra.labels[atom_index],))
    return UtilityIndex(sub, index.outcomes, (index.u[atom_index],))


def _run_vnm_recovery(spec: InstanceSpec, tamper) -> tuple[int, list]:
    instance = generate_vnm_instance(spec)
    oracle = instance.oracle()
    recovered = utility_index(
        oracle, instance.algebra, instance.outcomes, _SUITE_BITS
    )
    if tamper:
        recovered = tamper(recovered)
    found = []
    reason = _vnm_reason(instance, recovered, _SUITE_BITS, spec.seed)
    if reason is not None:
        key, detail, payload = reason
        witness = {"planted": _index_json(instance.index), "recovered": _index_json(recovered)}
        # shrink to the offending atom when one is identified
        atom_label = None
        if key == "affine-fit" and getattr(payload, "worst_at", None):
            atom_label = payload.worst_at[0]
        elif key == "sign-mismatch":
            atom_label = payload[0][1]
        if atom_label is not None and instance.algebra.size > 1:
            i = instance.algebra.labels.index(atom_label)
            small = VnmInstance(_project_index(instance.index, i))
            small_rec = _project_index(recovered, i)
            r = _vnm_reason(small, small_rec, _SUITE_BITS, spec.seed)
            if r is not None and r[0] == key:
                witness = {
                    "planted": _index_json(small.index),
                    "recovered": _index_json(small_rec),
                }
        found.append((key, detail, witness))
    return 1, found


def _index_json(index: UtilityIndex) -> dict[str, Any]:
    return {
        index.algebra.labels[i]: {
            o: str(index.u[i][k]) for k, o in enumerate(index.outcomes)
        }
        for i in range(index.algebra.size)
    }


def corrupt_perturb_index(index: UtilityIndex) -> UtilityIndex:
    """Shift one recovered utility by 1/8, far beyond any affine residual.

    The shifted entry is chosen outside the widest-spread pair so the fit
    cannot absorb it; with only two outcomes the pair is swapped instead,
    which forces a negative slope.
    """
    rows = [list(r) for r in index.u]
    if len(index.outcomes) >= 3:
        vals = rows[0]
        pairs = [(j, k) for j in range(len(vals)) for k in range(j + 1, len(vals))]
        j, k = max(pairs, key=lambda p: abs(vals[p[0]] - vals[p[1]]))
        other = next(t for t in range(len(vals)) if t not in (j, k))
        rows[0][other] += Fraction(1, 8)
    else:
        rows[0][0], rows[0][1] = rows[0][1], rows[0][0]
        if rows[0][0] == rows[0][1]:
            rows[0][0] += Fraction(1, 8)
    return UtilityIndex(index.algebra, index.outcomes, tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------------------
# usc-upgrade
# ---------------------------------------------------------------------------


def _run_usc_upgrade(spec: InstanceSpec, tamper) -> tuple[int, list]:
    inst = generate_preference_instance(spec)
    table = debreu_utility(inst.preference, inst.default_weights())
    upgraded = usc_upgrade(table, inst.preference)
    if tamper:
        upgraded = tamper(upgraded)
    found = []
    reason = _representation_reason(upgraded, inst.preference, None)
    cases = 1
    if reason is not None:
        key, detail, counterexample = reason
        small_table, small_pref = _shrink_representation(
            upgraded, inst.preference, None, key, counterexample
        )
        found.append(
            (
                key,
                detail,
                {
                    "ranking": _ranking_json(small_pref),
                    "table": utility_table_to_json(small_table),
                },
            )
        )
    else:
        image = interval_set_of_points(
            upgraded.algebra,
            [upgraded.image_at(i) for i in range(upgraded.algebra.size)],
        )
        cases += 1
        r = _gap_shape_reason(image)
        if r is not None:
            key, detail, (gap_index, atom_index) = r
            small = _shrink_gap_shapes(image, key, gap_index, atom_index)
            found.append((key, detail, {"image": interval_set_to_json(small)}))
    return cases, found


_RUNNERS = {
    "boolean-laws": _run_boolean,
    "axioms": _run_axioms,
    "representation": _run_representation,
    "gap-shapes": _run_gap_shapes,
    "vnm-recovery": _run_vnm_recovery,
    "usc-upgrade": _run_usc_upgrade,
}
