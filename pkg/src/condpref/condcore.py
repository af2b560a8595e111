"""Conditional elements, subsets, and exact conditional rationals.

A conditional element assigns a value to every atom of the event it lives
on.  Conditioning (restriction) shrinks the living event; pasting
(concatenation) glues elements along a partition of events.  A conditional
subset assigns a set of admissible values to every atom, with the empty set
meaning the subset is dead at that atom; its living event is derived, so
stability under pasting holds by construction.

Conditional rationals are total (they live on omega) and carry exact
fractions.  Comparisons between them return events: the answer to
"is q below r" is the largest event on which it is true.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ConfigurationError, DomainError, StructuralError
from .events import Coarsening, Event, EventAlgebra, largest_event

# ---------------------------------------------------------------------------
# conditional elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionalElement:
    """A choice of value on every atom of the living event.

    values is aligned with the ascending atom indices of living, so the
    element is hashable whenever its values are.
    """

    living: Event
    values: tuple

    def __post_init__(self) -> None:
        if len(self.values) != len(self.living):
            raise StructuralError(
                f"{len(self.values)} values for a living event of {len(self.living)} atoms"
            )

    @classmethod
    def from_map(
        cls, algebra: EventAlgebra, assignment: Mapping[int, object]
    ) -> ConditionalElement:
        """Build an element from an atom-index-to-value mapping."""
        indices = sorted(assignment)
        mask = 0
        for i in indices:
            if not 0 <= i < algebra.size:
                raise DomainError(f"atom index {i} outside the algebra")
            mask |= 1 << i
        return cls(Event(algebra, mask), tuple(assignment[i] for i in indices))

    @classmethod
    def everywhere(cls, algebra: EventAlgebra, value: object) -> ConditionalElement:
        return cls(algebra.omega, (value,) * algebra.size)

    @property
    def algebra(self) -> EventAlgebra:
        return self.living.algebra

    def value_at(self, atom_index: int) -> object:
        if atom_index not in self.living:
            raise DomainError(
                f"element does not live at atom {self.algebra.labels[atom_index]!r}"
            )
        slot = bin(self.living.mask & ((1 << atom_index) - 1)).count("1")
        return self.values[slot]

    def as_dict(self) -> dict[int, object]:
        return {i: v for i, v in zip(self.living, self.values)}

    def restrict(self, event: Event) -> ConditionalElement:
        """Condition the element to event (which must sit inside living)."""
        if not event <= self.living:
            raise DomainError(
                f"cannot restrict an element living on {self.living!r} to {event!r}"
            )
        d = self.as_dict()
        return ConditionalElement(event, tuple(d[i] for i in event))

    def __repr__(self) -> str:
        if self.living.is_empty:
            return "ConditionalElement(nowhere)"
        parts = [f"{v!r}|{self.algebra.labels[i]}" for i, v in self.as_dict().items()]
        return " + ".join(parts)


def concatenate(
    pieces: Sequence[tuple[Event, ConditionalElement]]
) -> ConditionalElement:
    """Paste elements together along pairwise disjoint events.

    Each piece (A, x) contributes the values of x on A, so x must live on
    all of A.  The result lives on the union of the events; passing a
    partition of omega therefore yields a total element.
    """
    if not pieces:
        raise StructuralError("concatenate needs at least one piece")
    algebra = pieces[0][0].algebra
    seen = 0
    combined: dict[int, object] = {}
    for event, element in pieces:
        if event.algebra != algebra or element.algebra != algebra:
            raise StructuralError("concatenate pieces must share one algebra")
        if seen & event.mask:
            raise StructuralError("concatenate events overlap")
        seen |= event.mask
        if not event <= element.living:
            raise DomainError(
                f"piece on {event!r} exceeds the element's living event {element.living!r}"
            )
        for i in event:
            combined[i] = element.value_at(i)
    return ConditionalElement.from_map(algebra, combined)


# ---------------------------------------------------------------------------
# conditional subsets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionalSubset:
    """Per-atom sets of admissible values; empty set means dead at that atom.

    The living event is derived from the per-atom sets, never stored, so
    every representable object automatically satisfies the stability
    invariant: pasting two conditional subsets along a partition again
    gives per-atom sets, hence a conditional subset.
    """

    algebra: EventAlgebra
    sets: tuple[frozenset, ...]

    def __post_init__(self) -> None:
        if len(self.sets) != self.algebra.size:
            raise StructuralError("one value set per atom is required")

    @classmethod
    def from_map(
        cls, algebra: EventAlgebra, assignment: Mapping[int, Iterable]
    ) -> ConditionalSubset:
        sets = [frozenset()] * algebra.size
        for i, vals in assignment.items():
            if not 0 <= i < algebra.size:
                raise DomainError(f"atom index {i} outside the algebra")
            sets[i] = frozenset(vals)
        return cls(algebra, tuple(sets))

    @classmethod
    def uniform(cls, algebra: EventAlgebra, values: Iterable) -> ConditionalSubset:
        vs = frozenset(values)
        return cls(algebra, (vs,) * algebra.size)

    @property
    def living(self) -> Event:
        mask = 0
        for i, s in enumerate(self.sets):
            if s:
                mask |= 1 << i
        return Event(self.algebra, mask)

    def members_at(self, atom_index: int) -> frozenset:
        return self.sets[atom_index]

    def restrict(self, event: Event) -> ConditionalSubset:
        if event.algebra != self.algebra:
            raise StructuralError("restriction event from a different algebra")
        return ConditionalSubset(
            self.algebra,
            tuple(s if i in event else frozenset() for i, s in enumerate(self.sets)),
        )

    def is_subset_of(self, other: ConditionalSubset) -> bool:
        """Conditional inclusion: per-atom containment, dead atoms included."""
        _same_subset_algebra(self, other)
        return all(a <= b for a, b in zip(self.sets, other.sets))

    def contains_element(self, x: ConditionalElement) -> bool:
        """True iff x lives inside this subset's living event and picks members."""
        if not x.living <= self.living:
            return False
        return all(x.value_at(i) in self.sets[i] for i in x.living)

    def __or__(self, other: ConditionalSubset) -> ConditionalSubset:
        return cond_union(self, other)

    def __and__(self, other: ConditionalSubset) -> ConditionalSubset:
        return cond_intersection(self, other)

    def __repr__(self) -> str:
        parts = []
        for i, s in enumerate(self.sets):
            if s:
                inner = ",".join(sorted(map(str, s)))
                parts.append(f"{{{inner}}}|{self.algebra.labels[i]}")
        return " + ".join(parts) if parts else "ConditionalSubset(nowhere)"


def cond_union(y: ConditionalSubset, z: ConditionalSubset) -> ConditionalSubset:
    """Join: per-atom union, living on the join of the living events."""
    _same_subset_algebra(y, z)
    return ConditionalSubset(y.algebra, tuple(a | b for a, b in zip(y.sets, z.sets)))


def cond_intersection(y: ConditionalSubset, z: ConditionalSubset) -> ConditionalSubset:
    """Meet: per-atom intersection on the largest event where it is nonempty."""
    _same_subset_algebra(y, z)
    return ConditionalSubset(y.algebra, tuple(a & b for a, b in zip(y.sets, z.sets)))


def cond_complement(
    y: ConditionalSubset, ambient: ConditionalSubset
) -> ConditionalSubset:
    """All ambient values that nowhere fall into y.

    At atoms where y is dead the complement carries the full ambient set,
    so complementing twice returns y exactly.
    """
    _same_subset_algebra(y, ambient)
    if not y.is_subset_of(ambient):
        raise DomainError("complement requires y to sit inside the ambient subset")
    return ConditionalSubset(
        y.algebra, tuple(x - s for s, x in zip(y.sets, ambient.sets))
    )


def _same_subset_algebra(a: ConditionalSubset, b: ConditionalSubset) -> None:
    if a.algebra != b.algebra:
        raise StructuralError("conditional subsets from different algebras")


# ---------------------------------------------------------------------------
# conditional rationals and naturals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionalRational:
    """A total assignment of exact rationals, one per atom."""

    algebra: EventAlgebra
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.algebra.size:
            raise StructuralError("one rational per atom is required")
        if not all(isinstance(v, Fraction) for v in self.values):
            raise StructuralError("conditional rationals carry Fraction values only")

    @classmethod
    def constant(cls, algebra: EventAlgebra, q) -> ConditionalRational:
        f = Fraction(q)
        return cls(algebra, (f,) * algebra.size)

    @classmethod
    def from_values(cls, algebra: EventAlgebra, values: Iterable) -> ConditionalRational:
        return cls(algebra, tuple(Fraction(v) for v in values))

    @classmethod
    def from_pieces(
        cls, pieces: Sequence[tuple[Event, ConditionalRational]]
    ) -> ConditionalRational:
        """Paste rationals along a partition of omega."""
        algebra = pieces[0][0].algebra
        out: list[Fraction | None] = [None] * algebra.size
        seen = 0
        for event, q in pieces:
            if event.algebra != algebra or q.algebra != algebra:
                raise StructuralError("pieces must share one algebra")
            if seen & event.mask:
                raise StructuralError("piece events overlap")
            seen |= event.mask
            for i in event:
                out[i] = q.values[i]
        if seen != algebra.omega.mask:
            raise StructuralError("piece events must cover omega")
        return cls(algebra, tuple(out))  # type: ignore[arg-type]

    def value_at(self, atom_index: int) -> Fraction:
        return self.values[atom_index]

    def __add__(self, other: ConditionalRational) -> ConditionalRational:
        _same_rational_algebra(self, other)
        return ConditionalRational(
            self.algebra, tuple(a + b for a, b in zip(self.values, other.values))
        )

    def __sub__(self, other: ConditionalRational) -> ConditionalRational:
        _same_rational_algebra(self, other)
        return ConditionalRational(
            self.algebra, tuple(a - b for a, b in zip(self.values, other.values))
        )

    def __mul__(self, other: ConditionalRational) -> ConditionalRational:
        _same_rational_algebra(self, other)
        return ConditionalRational(
            self.algebra, tuple(a * b for a, b in zip(self.values, other.values))
        )

    def __neg__(self) -> ConditionalRational:
        return ConditionalRational(self.algebra, tuple(-a for a in self.values))

    def __abs__(self) -> ConditionalRational:
        return ConditionalRational(self.algebra, tuple(abs(a) for a in self.values))

    def scale(self, factor) -> ConditionalRational:
        f = Fraction(factor)
        return ConditionalRational(self.algebra, tuple(f * a for a in self.values))

    def leq_event(self, other: ConditionalRational) -> Event:
        """The largest event on which self <= other."""
        _same_rational_algebra(self, other)
        return largest_event(
            self.algebra, lambda atom: self.values[atom.index] <= other.values[atom.index]
        )

    def lt_event(self, other: ConditionalRational) -> Event:
        _same_rational_algebra(self, other)
        return largest_event(
            self.algebra, lambda atom: self.values[atom.index] < other.values[atom.index]
        )

    def eq_event(self, other: ConditionalRational) -> Event:
        _same_rational_algebra(self, other)
        return largest_event(
            self.algebra, lambda atom: self.values[atom.index] == other.values[atom.index]
        )

    def max_abs(self) -> Fraction:
        return max(abs(v) for v in self.values)

    def __repr__(self) -> str:
        parts = [f"{v}|{self.algebra.labels[i]}" for i, v in enumerate(self.values)]
        return " + ".join(parts)


def q_add(q: ConditionalRational, r: ConditionalRational) -> ConditionalRational:
    """Atom-wise exact sum."""
    return q + r


def q_mul(q: ConditionalRational, r: ConditionalRational) -> ConditionalRational:
    """Atom-wise exact product."""
    return q * r


def q_abs(q: ConditionalRational) -> ConditionalRational:
    """Atom-wise absolute value."""
    return abs(q)


def q_leq(q: ConditionalRational, r: ConditionalRational) -> Event:
    """The largest event on which q <= r; its complement carries q > r."""
    return q.leq_event(r)


def _same_rational_algebra(a: ConditionalRational, b: ConditionalRational) -> None:
    if a.algebra != b.algebra:
        raise StructuralError("conditional rationals from different algebras")


@dataclass(frozen=True)
class ConditionalNatural:
    """A total assignment of indices, one per atom, 1-based by default."""

    algebra: EventAlgebra
    values: tuple[int, ...]
    one_based: bool = True

    def __post_init__(self) -> None:
        if len(self.values) != self.algebra.size:
            raise StructuralError("one index per atom is required")
        floor = 1 if self.one_based else 0
        bad = [v for v in self.values if not isinstance(v, int) or v < floor]
        if bad:
            raise ConfigurationError(f"indices below {floor}: {bad!r}")

    def value_at(self, atom_index: int) -> int:
        return self.values[atom_index]


def seq_index(
    seq: Mapping[int, ConditionalElement], n: ConditionalNatural
) -> ConditionalElement:
    """Evaluate a sequence of elements at a conditional index.

    The result at atom w is seq[n(w)] evaluated at w, which is the
    concatenation of the sequence members over the level sets of n.  Every
    index appearing in n must be present in seq, and the selected member
    must live at the atoms selecting it.
    """
    algebra = n.algebra
    combined: dict[int, object] = {}
    for i in range(algebra.size):
        k = n.value_at(i)
        if k not in seq:
            raise DomainError(f"index {k} at atom {algebra.labels[i]!r} is not in the sequence")
        member = seq[k]
        if member.algebra != algebra:
            raise StructuralError("sequence members must share the index's algebra")
        if i not in member.living:
            raise DomainError(
                f"sequence member {k} does not live at atom {algebra.labels[i]!r}"
            )
        combined[i] = member.value_at(i)
    return ConditionalElement.from_map(algebra, combined)


# ---------------------------------------------------------------------------
# locality checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalityViolation:
    sample_index: int
    atom_label: str
    got: object
    expected: object


@dataclass(frozen=True)
class LocalityReport:
    samples_checked: int
    violations: tuple[LocalityViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_locality(
    f: Callable[[ConditionalElement], ConditionalElement],
    samples: Sequence[tuple[ConditionalElement, ConditionalElement, Event]],
    *,
    lift: Callable[[Event], Event] | None = None,
    tolerance: float = 0.0,
) -> LocalityReport:
    """Test whether f commutes with pasting along events.

    For each sample (x, y, A) the check compares f applied to the paste of
    x on A and y off A against the paste of f(x) on A and f(y) off A.  The
    event A lives in the algebra of f's outputs; when f maps a fine algebra
    to a coarse one, pass lift to embed A into the input algebra.

    Values are compared exactly unless a positive tolerance is given, in
    which case numeric values may differ by at most that much.
    """
    violations: list[LocalityViolation] = []
    for k, (x, y, event) in enumerate(samples):
        inner = lift(event) if lift is not None else event
        glued = concatenate([(inner & x.living, x), (~inner & y.living, y)])
        got = f(glued)
        fx, fy = f(x), f(y)
        out_algebra = got.algebra
        expected = concatenate(
            [(event & fx.living, fx), (~event & fy.living, fy)]
        )
        if got.living != expected.living:
            violations.append(
                LocalityViolation(k, "<living>", got.living.labels(), expected.living.labels())
            )
            continue
        for i in got.living:
            a, b = got.value_at(i), expected.value_at(i)
            if not _values_close(a, b, tolerance):
                violations.append(
                    LocalityViolation(k, out_algebra.labels[i], a, b)
                )
    return LocalityReport(len(samples), tuple(violations))


def _values_close(a: object, b: object, tolerance: float) -> bool:
    if tolerance > 0 and isinstance(a, (int, float, Fraction)) and isinstance(b, (int, float, Fraction)):
        return abs(float(a) - float(b)) <= tolerance
    return a == b


def entropic_certainty_equivalent(
    coarsening: Coarsening, weights: Sequence[float]
) -> Callable[[ConditionalElement], ConditionalElement]:
    """A coarse-algebra certainty equivalent built from exponential weights.

    Given strictly positive weights on the fine atoms, the returned map
    sends a numeric element x to the coarse element whose value on a coarse
    atom is log of the weighted mean of exp(x) over that atom's block.  It
    is local with respect to coarse events: pasting inputs along a lifted
    coarse event pastes the outputs, because each block reads only the
    input values inside itself.
    """
    if len(weights) != coarsening.fine.size:
        raise ConfigurationError("one weight per fine atom is required")
    if not all(w > 0 for w in weights):
        raise ConfigurationError("weights must be strictly positive")

    def f(x: ConditionalElement) -> ConditionalElement:
        if x.algebra != coarsening.fine:
            raise StructuralError("input element must live on the fine algebra")
        combined: dict[int, object] = {}
        for c in range(coarsening.coarse.size):
            block = coarsening.block(c)
            if all(i in x.living for i in block):
                total = sum(weights[i] for i in block)
                mean = sum(
                    weights[i] / total * math.exp(float(x.value_at(i))) for i in block
                )
                combined[c] = math.log(mean)
        return ConditionalElement.from_map(coarsening.coarse, combined)

    return f
