"""Finite event algebras and their events.

An algebra is determined by a tuple of atom labels.  An event is a set of
atoms, stored as a bitmask over atom indices: bit i is set exactly when the
atom at index i belongs to the event.  All lattice operations are therefore
single integer instructions.  Events carry a reference to their algebra and
refuse to combine across algebras, which catches the most common way of
corrupting a computation early instead of late.

"Almost surely" has no measure-zero subtlety here: a statement holds almost
surely exactly when it holds on every atom.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .errors import ConfigurationError, StructuralError

DEFAULT_MAX_ATOMS = 16


class Atom(NamedTuple):
    index: int
    label: str


@dataclass(frozen=True)
class EventAlgebra:
    """The powerset algebra over a finite tuple of labelled atoms."""

    labels: tuple[str, ...]
    max_atoms: int = field(default=DEFAULT_MAX_ATOMS, compare=False)

    def __post_init__(self) -> None:
        if not self.labels:
            raise ConfigurationError("an event algebra needs at least one atom")
        if len(self.labels) > self.max_atoms:
            raise ConfigurationError(
                f"{len(self.labels)} atoms exceed the limit of {self.max_atoms}"
            )
        if len(set(self.labels)) != len(self.labels):
            raise ConfigurationError(f"atom labels must be distinct: {self.labels!r}")

    @classmethod
    def of_size(cls, m: int, prefix: str = "a") -> EventAlgebra:
        return cls(tuple(f"{prefix}{i}" for i in range(m)))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def atoms(self) -> tuple[Atom, ...]:
        return tuple(Atom(i, lab) for i, lab in enumerate(self.labels))

    @property
    def omega(self) -> Event:
        return Event(self, (1 << self.size) - 1)

    @property
    def empty(self) -> Event:
        return Event(self, 0)

    def atom_event(self, index: int) -> Event:
        if not 0 <= index < self.size:
            raise ConfigurationError(f"atom index {index} out of range")
        return Event(self, 1 << index)

    def event(self, labels: Iterable[str]) -> Event:
        """Build the event containing exactly the given atom labels."""
        mask = 0
        for lab in labels:
            try:
                mask |= 1 << self.labels.index(lab)
            except ValueError:
                raise ConfigurationError(f"unknown atom label {lab!r}") from None
        return Event(self, mask)

    def from_mask(self, mask: int) -> Event:
        return Event(self, mask)

    def all_events(self) -> Iterator[Event]:
        """Every event, from the empty one up to omega (2**m of them)."""
        for mask in range(1 << self.size):
            yield Event(self, mask)


@dataclass(frozen=True)
class Event:
    """A set of atoms of one algebra, encoded as a bitmask."""

    algebra: EventAlgebra
    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask < (1 << self.algebra.size):
            raise StructuralError(
                f"mask {self.mask:#x} out of range for {self.algebra.size} atoms"
            )

    # -- lattice structure -------------------------------------------------

    def __and__(self, other: Event) -> Event:
        _same_algebra(self, other)
        return Event(self.algebra, self.mask & other.mask)

    def __or__(self, other: Event) -> Event:
        _same_algebra(self, other)
        return Event(self.algebra, self.mask | other.mask)

    def __sub__(self, other: Event) -> Event:
        _same_algebra(self, other)
        return Event(self.algebra, self.mask & ~other.mask)

    def __invert__(self) -> Event:
        return Event(self.algebra, self.algebra.omega.mask & ~self.mask)

    def __le__(self, other: Event) -> bool:
        _same_algebra(self, other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: Event) -> bool:
        return self <= other and self.mask != other.mask

    # -- inspection --------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def is_omega(self) -> bool:
        return self.mask == self.algebra.omega.mask

    def __bool__(self) -> bool:
        return self.mask != 0

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __iter__(self) -> Iterator[int]:
        """Iterate over the indices of the atoms in this event."""
        mask = self.mask
        i = 0
        while mask:
            if mask & 1:
                yield i
            mask >>= 1
            i += 1

    def __contains__(self, atom_index: int) -> bool:
        return bool(self.mask >> atom_index & 1)

    def labels(self) -> tuple[str, ...]:
        return tuple(sorted(self.algebra.labels[i] for i in self))

    def __repr__(self) -> str:
        return f"Event({{{', '.join(self.labels())}}})"


def largest_event(algebra: EventAlgebra, pred: Callable[[Atom], bool]) -> Event:
    """The union of all atoms satisfying pred.

    This is the largest event on which pred holds at every atom; every event
    whose atoms all satisfy pred is contained in it.
    """
    mask = 0
    for atom in algebra.atoms:
        if pred(atom):
            mask |= 1 << atom.index
    return Event(algebra, mask)


def is_partition(events: Sequence[Event]) -> bool:
    """True iff the events are pairwise disjoint and cover omega."""
    if not events:
        return False
    algebra = events[0].algebra
    seen = 0
    for ev in events:
        _same_algebra(events[0], ev)
        if seen & ev.mask:
            return False
        seen |= ev.mask
    return seen == algebra.omega.mask


@dataclass(frozen=True)
class Coarsening:
    """A surjection from the atoms of a fine algebra onto a coarse one.

    block_of[i] is the coarse atom that fine atom i belongs to.  The coarse
    algebra embeds into the fine one by taking unions of blocks, which is
    what lift() computes.
    """

    fine: EventAlgebra
    coarse: EventAlgebra
    block_of: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.block_of) != self.fine.size:
            raise StructuralError("block_of must assign every fine atom")
        hit = set(self.block_of)
        if not all(0 <= c < self.coarse.size for c in hit):
            raise StructuralError("block_of points outside the coarse algebra")
        if hit != set(range(self.coarse.size)):
            raise StructuralError("every coarse atom needs at least one fine atom")

    def block(self, coarse_index: int) -> tuple[int, ...]:
        """The fine atoms making up one coarse atom."""
        return tuple(i for i, c in enumerate(self.block_of) if c == coarse_index)

    def lift(self, event: Event) -> Event:
        """Embed a coarse event into the fine algebra."""
        _same_algebra(self.coarse.omega, event)
        mask = 0
        for i, c in enumerate(self.block_of):
            if c in event:
                mask |= 1 << i
        return Event(self.fine, mask)


def _same_algebra(a: Event, b: Event) -> None:
    if a.algebra != b.algebra:
        raise StructuralError(
            f"events from different algebras: {a.algebra.labels!r} vs {b.algebra.labels!r}"
        )
