"""Numerical representations of conditional preferences.

A UtilityTable assigns an exact rational to every ground value at every
atom.  Evaluating it on an element is therefore local by construction:
pasting inputs along events pastes the outputs.  debreu_utility builds a
representing table by weighing, for each value, everything strictly below
it minus everything strictly above it; rader_utility builds one from a
finite conditional topology whose base sets are charged to the values
whose strict lower contours they fit inside.

Both constructions are verified rather than trusted: verify_representation
replays the ranking against the table pair by pair, and rader_utility
checks its upper-semicontinuity precondition instead of assuming it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .condcore import (
    ConditionalElement,
    ConditionalRational,
    ConditionalSubset,
    LocalityReport,
    check_locality,
)
from .errors import (
    ConfigurationError,
    DomainError,
    PreconditionError,
    StructuralError,
)
from .events import EventAlgebra
from .preference import ConditionalPreference, strictly_preferred_set


@dataclass(frozen=True)
class UtilityTable:
    """Per-atom maps from ground values to exact rationals."""

    algebra: EventAlgebra
    tables: tuple[Mapping, ...]

    def __post_init__(self) -> None:
        if len(self.tables) != self.algebra.size:
            raise StructuralError("one value map per atom is required")

    def value_at(self, atom_index: int, value) -> Fraction:
        try:
            return self.tables[atom_index][value]
        except KeyError:
            raise DomainError(
                f"no utility for value {value!r} at atom "
                f"{self.algebra.labels[atom_index]!r}"
            ) from None

    def of(self, x: ConditionalElement) -> ConditionalRational:
        """Evaluate on a total element."""
        if not x.living.is_omega:
            raise DomainError("utility is evaluated on elements living on omega")
        return ConditionalRational(
            self.algebra,
            tuple(self.value_at(i, x.value_at(i)) for i in range(self.algebra.size)),
        )

    def of_partial(self, x: ConditionalElement) -> ConditionalElement:
        """Evaluate on any element, keeping its living event."""
        return ConditionalElement(
            x.living, tuple(self.value_at(i, x.value_at(i)) for i in x.living)
        )

    def compose(self, phi: Callable[[Fraction], Fraction]) -> UtilityTable:
        """Apply a per-value transform atom-wise (phi should be strictly increasing)."""
        return UtilityTable(
            self.algebra,
            tuple({v: Fraction(phi(q)) for v, q in t.items()} for t in self.tables),
        )

    def image_at(self, atom_index: int) -> tuple[Fraction, ...]:
        return tuple(sorted(set(self.tables[atom_index].values())))


@dataclass(frozen=True)
class WeightScheme:
    """Strictly positive rational weights per atom and ground value."""

    algebra: EventAlgebra
    weight_at: tuple[Mapping, ...]

    def __post_init__(self) -> None:
        if len(self.weight_at) != self.algebra.size:
            raise StructuralError("one weight map per atom is required")
        for i, t in enumerate(self.weight_at):
            for v, w in t.items():
                if not isinstance(w, Fraction) or w <= 0:
                    raise ConfigurationError(
                        f"weight for {v!r} at atom {self.algebra.labels[i]!r} "
                        f"must be a positive rational, got {w!r}"
                    )

    @classmethod
    def halving(
        cls, algebra: EventAlgebra, values_per_atom: Sequence[Sequence]
    ) -> WeightScheme:
        """The default scheme: the n-th value of an atom weighs 2**-n.

        Enumeration order is the order of the given value lists, which for
        instances loaded from files is the file's value order.
        """
        tables = []
        for values in values_per_atom:
            tables.append(
                {v: Fraction(1, 2 ** (n + 1)) for n, v in enumerate(values)}
            )
        return cls(algebra, tuple(tables))

    @classmethod
    def halving_from_pref(cls, pref: ConditionalPreference) -> WeightScheme:
        """Default weights enumerated in tie-group order, best group first."""
        per_atom = []
        for i in range(pref.algebra.size):
            ordered = []
            for g in pref.groups[i]:
                ordered.extend(sorted(g, key=str))
            per_atom.append(ordered)
        return cls.halving(pref.algebra, per_atom)

    def get(self, atom_index: int, value) -> Fraction:
        try:
            return self.weight_at[atom_index][value]
        except KeyError:
            raise DomainError(
                f"no weight for value {value!r} at atom "
                f"{self.algebra.labels[atom_index]!r}"
            ) from None

    def min_weight_at(self, atom_index: int) -> Fraction:
        return min(self.weight_at[atom_index].values())


def contour_sets(
    pref: ConditionalPreference, x: ConditionalElement
) -> tuple[ConditionalSubset, ConditionalSubset]:
    """The strictly-worse and strictly-better value sets around x.

    Returns (zminus, zplus) where zminus holds the values x beats strictly
    and zplus the values beating x strictly, each living on its maximal
    nonempty event.
    """
    zplus = strictly_preferred_set(pref, x)
    sets = []
    for i in range(pref.algebra.size):
        r = pref.rank_at(i, x.value_at(i))
        worse: frozenset = frozenset()
        for g in pref.groups[i][r + 1 :]:
            worse |= g
        sets.append(worse)
    return ConditionalSubset(pref.algebra, tuple(sets)), zplus


def debreu_utility(pref: ConditionalPreference, weights: WeightScheme) -> UtilityTable:
    """Weigh strictly-worse values positively and strictly-better negatively.

    At each atom, U(v) is the total weight of the values below v's
    tie-group minus the total weight above it.  Ties share a value and a
    strict step is worth at least the crossed value's weight, so the table
    represents the preference with a guaranteed margin.
    """
    if weights.algebra != pref.algebra:
        raise StructuralError("weights live on a different algebra than the preference")
    tables = []
    for i in range(pref.algebra.size):
        group_w = [sum(weights.get(i, v) for v in g) for g in pref.groups[i]]
        total = sum(group_w)
        acc = Fraction(0)
        above = []  # above[r] = total weight of groups ranked better than r
        for w in group_w:
            above.append(acc)
            acc += w
        table = {}
        for r, g in enumerate(pref.groups[i]):
            u = (total - above[r] - group_w[r]) - above[r]
            for v in g:
                table[v] = u
        tables.append(table)
    return UtilityTable(pref.algebra, tuple(tables))


@dataclass(frozen=True)
class RepresentationReport:
    ok: bool
    counterexample: tuple | None
    locality: LocalityReport

    def describe(self) -> str:
        if self.ok:
            return "representation verified"
        if self.counterexample is not None:
            atom, v, w, direction = self.counterexample
            return f"at atom {atom!r}: {v!r} vs {w!r} ({direction})"
        return "utility table is not local"


def verify_representation(
    table: UtilityTable, pref: ConditionalPreference
) -> RepresentationReport:
    """Check that ranking order and utility order agree everywhere.

    Scans every ordered pair of ground values at every atom and reports the
    first disagreement in either direction.  Also runs a locality probe
    through the table by pasting elements along each atom.
    """
    if table.algebra != pref.algebra:
        raise StructuralError("table lives on a different algebra than the preference")
    counterexample = None
    for i in range(pref.algebra.size):
        values = sorted(pref.ground_at(i), key=str)
        for v in values:
            for w in values:
                ranked = pref.rank_at(i, v) <= pref.rank_at(i, w)
                scored = table.value_at(i, v) >= table.value_at(i, w)
                if ranked != scored:
                    direction = "ranked better but scored lower" if ranked else (
                        "scored higher but ranked worse"
                    )
                    counterexample = (pref.algebra.labels[i], v, w, direction)
                    break
            if counterexample:
                break
        if counterexample:
            break

    locality = _locality_probe(table, pref)
    return RepresentationReport(
        ok=counterexample is None and locality.ok,
        counterexample=counterexample,
        locality=locality,
    )


def _locality_probe(table: UtilityTable, pref: ConditionalPreference) -> LocalityReport:
    algebra = pref.algebra
    lo = ConditionalElement(
        algebra.omega, tuple(sorted(pref.ground_at(i), key=str)[0] for i in range(algebra.size))
    )
    hi = ConditionalElement(
        algebra.omega, tuple(sorted(pref.ground_at(i), key=str)[-1] for i in range(algebra.size))
    )
    samples = [(lo, hi, algebra.atom_event(i)) for i in range(algebra.size)]
    samples.append((hi, lo, algebra.omega))
    return check_locality(table.of_partial, samples)


def order_dense_subset(pref: ConditionalPreference) -> ConditionalSubset:
    """One canonical representative per tie-group per atom.

    The result Z is order dense: whenever x is strictly preferred to y,
    the representative of x's own tie-group z satisfies x at least as good
    as z and z at least as good as y at every relevant atom.
    """
    sets = []
    for gs in pref.groups:
        sets.append(frozenset(sorted(g, key=str)[0] for g in gs))
    return ConditionalSubset(pref.algebra, tuple(sets))


def is_order_dense(pref: ConditionalPreference, z: ConditionalSubset) -> bool:
    """Density oracle: every strict pair has a weak-between witness in z."""
    if z.algebra != pref.algebra:
        raise StructuralError("subset lives on a different algebra than the preference")
    for i in range(pref.algebra.size):
        ranks = sorted({pref.rank_at(i, c) for c in z.members_at(i)})
        k = pref.n_groups_at(i)
        for ra in range(k):
            for rb in range(ra + 1, k):
                if not any(ra <= rc <= rb for rc in ranks):
                    return False
    return True


@dataclass(frozen=True)
class FiniteCondTopology:
    """A finite base of conditional subsets of the ambient structure."""

    base: tuple[ConditionalSubset, ...]

    def __post_init__(self) -> None:
        if not self.base:
            raise StructuralError("a topology base needs at least one set")
        algebra = self.base[0].algebra
        if any(o.algebra != algebra for o in self.base):
            raise StructuralError("base sets must share one algebra")

    @property
    def algebra(self) -> EventAlgebra:
        return self.base[0].algebra

    @classmethod
    def trivial(cls, ambient: ConditionalSubset) -> FiniteCondTopology:
        return cls((ambient,))

    @classmethod
    def discrete(cls, ambient: ConditionalSubset) -> FiniteCondTopology:
        """One singleton base set per atom and value; every subset is open."""
        sets = []
        for i in range(ambient.algebra.size):
            for v in sorted(ambient.members_at(i), key=str):
                sets.append(ConditionalSubset.from_map(ambient.algebra, {i: [v]}))
        return cls(tuple(sets))

    @classmethod
    def lower_contours(cls, pref: ConditionalPreference) -> FiniteCondTopology:
        """The strict lower contour sets, one per tie-group depth.

        The r-th base set carries, at each atom, everything strictly worse
        than that atom's group of rank min(r, deepest).  Its atom slices
        run through all strict lower sets, so every strict lower contour
        of the preference is open in this base.
        """
        depth = max(pref.n_groups_at(i) for i in range(pref.algebra.size))
        sets = []
        for r in range(depth):
            per_atom = []
            for i in range(pref.algebra.size):
                rr = min(r, pref.n_groups_at(i) - 1)
                worse: frozenset = frozenset()
                for g in pref.groups[i][rr + 1 :]:
                    worse |= g
                per_atom.append(worse)
            sets.append(ConditionalSubset(pref.algebra, tuple(per_atom)))
        return cls(tuple(sets))


def rader_utility(
    pref: ConditionalPreference,
    topo: FiniteCondTopology,
    index_weights: Sequence[Fraction],
) -> UtilityTable:
    """Charge each base set to the values whose strict lower contour absorbs it.

    U(v) at an atom sums the weights of the base sets that are alive there
    and fit, at that atom, inside the set of values strictly worse than v.
    The preference must be upper semicontinuous with respect to the base:
    each strict lower contour has to be a union of conditioned base sets.
    That precondition is checked first and a violation names the value and
    the uncoverable witness.
    """
    algebra = pref.algebra
    if topo.algebra != algebra:
        raise StructuralError("topology lives on a different algebra than the preference")
    if len(index_weights) != len(topo.base):
        raise ConfigurationError("one weight per base set is required")
    weights = [Fraction(w) for w in index_weights]
    if any(w <= 0 for w in weights):
        raise ConfigurationError("base-set weights must be strictly positive")
    ambient = pref.ground_subset()
    for o in topo.base:
        if not o.is_subset_of(ambient):
            raise StructuralError("base set leaves the ambient ground structure")

    tables: list[dict] = [dict() for _ in range(algebra.size)]
    for i in range(algebra.size):
        for v in pref.ground_at(i):
            r = pref.rank_at(i, v)
            worse: set = set()
            for g in pref.groups[i][r + 1 :]:
                worse |= g
            for w in worse:
                if not any(
                    o.members_at(i) and w in o.members_at(i) and o.members_at(i) <= worse
                    for o in topo.base
                ):
                    raise PreconditionError(
                        f"preference is not upper semicontinuous in this base: the "
                        f"strict lower contour of {v!r} at atom {algebra.labels[i]!r} "
                        f"cannot cover {w!r} with base sets"
                    )
            tables[i][v] = sum(
                (
                    wt
                    for o, wt in zip(topo.base, weights)
                    if o.members_at(i) and o.members_at(i) <= worse
                ),
                Fraction(0),
            )
    table = UtilityTable(algebra, tuple(tables))
    report = verify_representation(table, pref)
    if not report.ok:
        raise StructuralError(
            f"constructed table fails to represent the preference: {report.describe()}"
        )
    return table
