"""Conditional preference orders over finite ground structures.

A conditional preference is stored canonically as one total preorder per
atom, each given as a list of tie-groups from best to worst.  The
conditional relation between two elements is derived atom by atom, so the
consistency and stability axioms hold by construction, and the answer to
"is x weakly preferred to y" is an event: the largest one on which it is
true.

Strict preference deliberately follows the strong reading: x is strictly
preferred to y on an event exactly when x is weakly preferred there and y
is weakly preferred back on no nonempty subevent.  With per-atom total
preorders that event is the set of atoms where x's tie-group beats y's.

verify_axioms goes the other way: it takes a raw list of assertions
"x is weakly preferred to y on A" and checks the axioms directly, then
attempts to reconstruct a ConditionalPreference that induces exactly the
asserted relation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .condcore import ConditionalElement, ConditionalSubset
from .errors import ConfigurationError, DomainError, StructuralError
from .events import Event, EventAlgebra, is_partition, largest_event


@dataclass(frozen=True)
class TriPartition:
    """Maximal events where x and y tie, x wins strictly, y wins strictly."""

    equiv: Event
    strict_first: Event
    strict_second: Event

    def __post_init__(self) -> None:
        if not is_partition([self.equiv, self.strict_first, self.strict_second]):
            raise StructuralError("tri-partition cells must partition omega")


@dataclass(frozen=True)
class ConditionalPreference:
    """Per-atom total preorders, each a tuple of tie-groups listed best first."""

    algebra: EventAlgebra
    groups: tuple[tuple[frozenset, ...], ...]
    allow_trivial: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.groups) != self.algebra.size:
            raise StructuralError("one tie-group list per atom is required")
        for i, gs in enumerate(self.groups):
            if not gs:
                raise StructuralError(f"atom {self.algebra.labels[i]!r} has no tie-groups")
            seen: set = set()
            for g in gs:
                if not g:
                    raise StructuralError("empty tie-group")
                if g & seen:
                    raise StructuralError("tie-groups overlap")
                seen |= g
        if not self.allow_trivial and all(len(gs) == 1 for gs in self.groups):
            raise ConfigurationError(
                "preference is conditionally trivial (one tie-group at every atom); "
                "pass allow_trivial=True if that is intended"
            )

    @classmethod
    def from_rankings(
        cls,
        algebra: EventAlgebra,
        rankings: Mapping[int, Sequence[Iterable]],
        allow_trivial: bool = False,
    ) -> ConditionalPreference:
        """Build from {atom index: [best group, ..., worst group]}."""
        if set(rankings) != set(range(algebra.size)):
            raise StructuralError("rankings must cover every atom exactly once")
        groups = tuple(
            tuple(frozenset(g) for g in rankings[i]) for i in range(algebra.size)
        )
        return cls(algebra, groups, allow_trivial)

    def ground_at(self, atom_index: int) -> frozenset:
        out: frozenset = frozenset()
        for g in self.groups[atom_index]:
            out |= g
        return out

    def ground_subset(self) -> ConditionalSubset:
        """The ambient conditional subset of all ranked values."""
        return ConditionalSubset(
            self.algebra,
            tuple(self.ground_at(i) for i in range(self.algebra.size)),
        )

    def rank_at(self, atom_index: int, value) -> int:
        """Tie-group index of a value at one atom; 0 is the best group."""
        for r, g in enumerate(self.groups[atom_index]):
            if value in g:
                return r
        raise DomainError(
            f"value {value!r} is not ranked at atom {self.algebra.labels[atom_index]!r}"
        )

    def n_groups_at(self, atom_index: int) -> int:
        return len(self.groups[atom_index])


def holds(pref: ConditionalPreference, x: ConditionalElement, y: ConditionalElement) -> Event:
    """The largest event on which x is weakly preferred to y."""
    _check_total(pref, x, "x")
    _check_total(pref, y, "y")
    return largest_event(
        pref.algebra,
        lambda atom: pref.rank_at(atom.index, x.value_at(atom.index))
        <= pref.rank_at(atom.index, y.value_at(atom.index)),
    )


def tri_partition(
    pref: ConditionalPreference, x: ConditionalElement, y: ConditionalElement
) -> TriPartition:
    """Split omega into the maximal tie, x-strict, and y-strict events."""
    xy = holds(pref, x, y)
    yx = holds(pref, y, x)
    return TriPartition(equiv=xy & yx, strict_first=xy - yx, strict_second=yx - xy)


def strictly_preferred_set(
    pref: ConditionalPreference, y: ConditionalElement
) -> ConditionalSubset:
    """Per-atom sets of values strictly preferred to y, on their maximal event."""
    _check_total(pref, y, "y")
    sets = []
    for i in range(pref.algebra.size):
        r = pref.rank_at(i, y.value_at(i))
        better: frozenset = frozenset()
        for g in pref.groups[i][:r]:
            better |= g
        sets.append(better)
    return ConditionalSubset(pref.algebra, tuple(sets))


def upper_contour(
    pref: ConditionalPreference, x: ConditionalElement
) -> ConditionalSubset:
    """Per-atom sets of values weakly preferred to x; always lives on omega."""
    _check_total(pref, x, "x")
    sets = []
    for i in range(pref.algebra.size):
        r = pref.rank_at(i, x.value_at(i))
        upper: frozenset = frozenset()
        for g in pref.groups[i][: r + 1]:
            upper |= g
        sets.append(upper)
    return ConditionalSubset(pref.algebra, tuple(sets))


def _check_total(pref: ConditionalPreference, x: ConditionalElement, name: str) -> None:
    if x.algebra != pref.algebra:
        raise StructuralError(f"{name} lives on a different algebra than the preference")
    if not x.living.is_omega:
        raise DomainError(f"{name} must live on omega, not {x.living!r}")


# ---------------------------------------------------------------------------
# raw relation graphs and axiom verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelationGraph:
    """Finite list of assertions "x is weakly preferred to y on event"."""

    assertions: tuple[tuple[ConditionalElement, ConditionalElement, Event], ...]

    def __post_init__(self) -> None:
        if not self.assertions:
            raise StructuralError("a relation graph needs at least one assertion")
        algebra = self.assertions[0][2].algebra
        for x, y, event in self.assertions:
            if x.algebra != algebra or y.algebra != algebra or event.algebra != algebra:
                raise StructuralError("graph assertions must share one algebra")
            if event.is_empty:
                raise StructuralError("graph events must be nonempty")
            if not (x.living.is_omega and y.living.is_omega):
                raise StructuralError("graph elements must live on omega")

    @property
    def algebra(self) -> EventAlgebra:
        return self.assertions[0][2].algebra

    def elements(self) -> tuple[ConditionalElement, ...]:
        seen: dict[tuple, ConditionalElement] = {}
        for x, y, _ in self.assertions:
            seen.setdefault(x.values, x)
            seen.setdefault(y.values, y)
        return tuple(seen.values())


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    x: ConditionalElement
    y: ConditionalElement
    event: Event

    def describe(self) -> str:
        return (
            f"{self.axiom}: x={element_repr(self.x)} y={element_repr(self.y)} "
            f"on {self.event!r}"
        )


def element_repr(x: ConditionalElement) -> str:
    return "+".join(f"{x.value_at(i)}|{x.algebra.labels[i]}" for i in x.living)


@dataclass(frozen=True)
class AxiomReport:
    violations: tuple[AxiomViolation, ...]
    exact: bool
    induced_preference: ConditionalPreference | None
    note: str = ""

    @property
    def satisfied(self) -> bool:
        return not self.violations

    def by_axiom(self, axiom: str) -> tuple[AxiomViolation, ...]:
        return tuple(v for v in self.violations if v.axiom == axiom)


def verify_axioms(graph: RelationGraph, ambient: ConditionalSubset) -> AxiomReport:
    """Check the preference axioms on a raw assertion graph.

    Consistency and stability are closure conditions on the assertion list
    itself: shrinking an asserted event or joining two asserted events for
    the same pair must stay asserted.  Reflexivity, transitivity, and local
    completeness are read off the induced per-atom value relations.

    The report also says whether the assertions are exactly the relation
    induced by some ConditionalPreference over the ambient ground sets and
    returns that preference when they are.
    """
    algebra = graph.algebra
    if ambient.algebra != algebra:
        raise StructuralError("ambient ground sets live on a different algebra")
    elements = graph.elements()
    for e in elements:
        for i in range(algebra.size):
            if e.value_at(i) not in ambient.members_at(i):
                raise DomainError(
                    f"element value {e.value_at(i)!r} is outside the ground set "
                    f"at atom {algebra.labels[i]!r}"
                )

    asserted: set[tuple[tuple, tuple, int]] = {
        (x.values, y.values, ev.mask) for x, y, ev in graph.assertions
    }
    by_pair: dict[tuple[tuple, tuple], list[int]] = {}
    for x, y, ev in graph.assertions:
        by_pair.setdefault((x.values, y.values), []).append(ev.mask)
    by_values = {e.values: e for e in elements}

    violations: list[AxiomViolation] = []

    # Induced per-atom relations on values.
    rel: list[set[tuple]] = [set() for _ in range(algebra.size)]
    for x, y, ev in graph.assertions:
        for i in ev:
            rel[i].add((x.value_at(i), y.value_at(i)))
    reachable: list[set] = [
        {e.value_at(i) for e in elements} for i in range(algebra.size)
    ]

    # Reflexivity on every value an element reaches.
    for e in elements:
        if (e.values, e.values, algebra.omega.mask) not in asserted:
            violations.append(AxiomViolation("reflexivity", e, e, algebra.omega))

    # Consistency: closure under shrinking the event.
    for x, y, ev in graph.assertions:
        sub = (ev.mask - 1) & ev.mask
        while sub:
            if (x.values, y.values, sub) not in asserted:
                violations.append(
                    AxiomViolation("consistency", x, y, Event(algebra, sub))
                )
            sub = (sub - 1) & ev.mask

    # Stability: closure under joining events for the same pair.
    for (xv, yv), masks in by_pair.items():
        for m1, m2 in itertools.combinations(set(masks), 2):
            if (xv, yv, m1 | m2) not in asserted:
                violations.append(
                    AxiomViolation(
                        "stability", by_values[xv], by_values[yv], Event(algebra, m1 | m2)
                    )
                )

    # Transitivity on the induced per-atom relations.
    for i in range(algebra.size):
        for a, b in rel[i]:
            for b2, c in rel[i]:
                if b2 == b and (a, c) not in rel[i]:
                    xa = _element_with_value(elements, i, a)
                    yc = _element_with_value(elements, i, c)
                    violations.append(
                        AxiomViolation("transitivity", xa, yc, algebra.atom_event(i))
                    )

    # Local completeness: every pair not everywhere equivalent carries a
    # strict comparison on some nonempty event.
    for ex, ey in itertools.combinations(elements, 2):
        weak_xy = largest_event(
            algebra, lambda atom: (ex.value_at(atom.index), ey.value_at(atom.index)) in rel[atom.index]
        )
        weak_yx = largest_event(
            algebra, lambda atom: (ey.value_at(atom.index), ex.value_at(atom.index)) in rel[atom.index]
        )
        if weak_xy.is_omega and weak_yx.is_omega:
            continue  # everywhere equivalent
        if (weak_xy - weak_yx) or (weak_yx - weak_xy):
            continue  # a strict event exists on one side
        violations.append(AxiomViolation("local-completeness", ex, ey, algebra.empty))

    induced, exact, note = _reconstruct(algebra, ambient, elements, rel, asserted)
    if violations:
        exact, induced = False, None
    return AxiomReport(tuple(violations), exact, induced, note)


def _element_with_value(
    elements: Sequence[ConditionalElement], atom_index: int, value
) -> ConditionalElement:
    for e in elements:
        if e.value_at(atom_index) == value:
            return e
    raise AssertionError("value came from an element, so one must match")


def _reconstruct(
    algebra: EventAlgebra,
    ambient: ConditionalSubset,
    elements: Sequence[ConditionalElement],
    rel: Sequence[set[tuple]],
    asserted: set[tuple[tuple, tuple, int]],
) -> tuple[ConditionalPreference | None, bool, str]:
    """Try to exhibit a preference inducing exactly the asserted triples."""
    groups: list[tuple[frozenset, ...]] = []
    for i in range(algebra.size):
        values = ambient.members_at(i)
        reached = {e.value_at(i) for e in elements}
        if reached != values:
            return None, False, (
                f"ground values at atom {algebra.labels[i]!r} are not all reached "
                "by graph elements, so no preference over the ambient sets is determined"
            )
        for a, b in itertools.combinations(values, 2):
            if (a, b) not in rel[i] and (b, a) not in rel[i]:
                return None, False, (
                    f"values {a!r} and {b!r} are incomparable at atom "
                    f"{algebra.labels[i]!r}"
                )
        for a, b in itertools.product(values, repeat=2):
            if (a, b) in rel[i]:
                for c in values:
                    if (b, c) in rel[i] and (a, c) not in rel[i]:
                        return None, False, "induced relation is not transitive"
        if any((v, v) not in rel[i] for v in values):
            return None, False, "induced relation is not reflexive"
        strictly_below = {
            v: sum(
                1
                for w in values
                if (v, w) in rel[i] and (w, v) not in rel[i]
            )
            for v in values
        }
        tiers: dict[int, set] = {}
        for v, k in strictly_below.items():
            tiers.setdefault(k, set()).add(v)
        groups.append(
            tuple(frozenset(tiers[k]) for k in sorted(tiers, reverse=True))
        )
    pref = ConditionalPreference(algebra, tuple(groups), allow_trivial=True)

    expected: set[tuple[tuple, tuple, int]] = set()
    for ex in elements:
        for ey in elements:
            top = holds(pref, ex, ey)
            sub = top.mask
            while sub:
                expected.add((ex.values, ey.values, sub))
                sub = (sub - 1) & top.mask
    if expected == asserted:
        return pref, True, ""
    missing = len(expected - asserted)
    extra = len(asserted - expected)
    return None, False, (
        f"assertions differ from the induced relation "
        f"({missing} missing, {extra} extra)"
    )


def induced_graph(
    pref: ConditionalPreference, elements: Sequence[ConditionalElement]
) -> RelationGraph:
    """The full relation a preference induces on the given elements.

    Contains (x, y, A) for every ordered pair and every nonempty event A on
    which x is weakly preferred to y, so it passes verify_axioms exactly.
    """
    triples = []
    for x in elements:
        for y in elements:
            top = holds(pref, x, y)
            sub = top.mask
            while sub:
                triples.append((x, y, Event(pref.algebra, sub)))
                sub = (sub - 1) & top.mask
    if not triples:
        raise StructuralError("no nonempty weak-preference events among the elements")
    return RelationGraph(tuple(triples))
