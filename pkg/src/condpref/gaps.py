"""Interval subsets of the rationals per atom, their gaps, and gap repair.

A conditional interval set stores, for each atom, a canonical list of
pairwise disjoint, non-mergeable rational intervals.  A gap is a maximal
interval of the complement lying strictly between the set's infimum and
supremum at that atom.  Gaps aligned by component index across atoms form
conditional gap records, each carrying the partition of its living event
into the five shape cells: closed, left-closed, right-closed, open, and
singleton.

gap_normalize repairs a set with a strictly increasing piecewise affine
map: a gap attained on both sides stays an open gap, a gap attained on
exactly one side is closed up so its neighbours merge, and a gap attained
on neither side collapses to a single missing point.  The image therefore
only has absent, singleton, or open gaps, which is what makes upgraded
utility tables upper semicontinuous at this scale.

midpoint_embedding is the enumerative alternative: it sends a finite
family of conditional rationals order-isomorphically onto dyadic
rationals in [0, 1] by repeated midpoint insertion, and commutes with
conditioning of the enumeration index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .condcore import ConditionalNatural, ConditionalRational
from .errors import DomainError, OrderingError, PreconditionError, StructuralError
from .events import Event, EventAlgebra
from .preference import ConditionalPreference
from .representation import UtilityTable, verify_representation

_NEG_INF = float("-inf")
_POS_INF = float("inf")


@dataclass(frozen=True)
class RationalInterval:
    """A rational interval; None endpoints mean unbounded on that side."""

    lo: Fraction | None
    hi: Fraction | None
    lo_closed: bool
    hi_closed: bool

    def __post_init__(self) -> None:
        if self.lo is None and self.lo_closed:
            raise OrderingError("an unbounded lower end cannot be closed")
        if self.hi is None and self.hi_closed:
            raise OrderingError("an unbounded upper end cannot be closed")
        if self.lo is not None and self.hi is not None:
            if self.lo > self.hi:
                raise OrderingError(f"interval endpoints out of order: {self}")
            if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
                raise OrderingError("a degenerate interval must be closed on both sides")

    @classmethod
    def point(cls, q) -> RationalInterval:
        f = Fraction(q)
        return cls(f, f, True, True)

    @classmethod
    def make(cls, lo, hi, lo_closed: bool, hi_closed: bool) -> RationalInterval:
        return cls(
            None if lo is None else Fraction(lo),
            None if hi is None else Fraction(hi),
            lo_closed,
            hi_closed,
        )

    @property
    def is_point(self) -> bool:
        return self.lo is not None and self.lo == self.hi

    @property
    def lo_value(self):
        return _NEG_INF if self.lo is None else self.lo

    @property
    def hi_value(self):
        return _POS_INF if self.hi is None else self.hi

    def contains(self, q: Fraction) -> bool:
        if self.lo is not None and (q < self.lo or (q == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (q > self.hi or (q == self.hi and not self.hi_closed)):
            return False
        return True

    def affine(self, a: Fraction, b: Fraction) -> RationalInterval:
        if a <= 0:
            raise OrderingError("affine images require a positive slope")
        return RationalInterval(
            None if self.lo is None else a * self.lo + b,
            None if self.hi is None else a * self.hi + b,
            self.lo_closed,
            self.hi_closed,
        )

    def shape(self) -> str:
        """One of singleton, closed, left-closed, right-closed, open."""
        if self.is_point:
            return "singleton"
        if self.lo_closed and self.hi_closed:
            return "closed"
        if self.lo_closed:
            return "left-closed"
        if self.hi_closed:
            return "right-closed"
        return "open"

    def __repr__(self) -> str:
        left = "[" if self.lo_closed else "]"
        right = "]" if self.hi_closed else "["
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return f"{left}{lo},{hi}{right}"


def _merge_run(intervals: Sequence[RationalInterval]) -> list[RationalInterval]:
    """Sort and fuse overlapping or closed-touching intervals."""
    ordered = sorted(
        intervals, key=lambda iv: (iv.lo_value, 0 if iv.lo_closed else 1)
    )
    out: list[RationalInterval] = []
    for iv in ordered:
        if out:
            cur = out[-1]
            touching = cur.hi_value > iv.lo_value or (
                cur.hi_value == iv.lo_value and (cur.hi_closed or iv.lo_closed)
            )
            if touching:
                if cur.hi_value > iv.hi_value:
                    hi, hic = cur.hi, cur.hi_closed
                elif cur.hi_value < iv.hi_value:
                    hi, hic = iv.hi, iv.hi_closed
                else:
                    hi, hic = cur.hi, cur.hi_closed or iv.hi_closed
                out[-1] = RationalInterval(cur.lo, hi, cur.lo_closed, hic)
                continue
        out.append(iv)
    return out


@dataclass(frozen=True)
class ConditionalIntervalSet:
    """Canonical per-atom interval lists; an empty list means dead there."""

    algebra: EventAlgebra
    components: tuple[tuple[RationalInterval, ...], ...]

    def __post_init__(self) -> None:
        if len(self.components) != self.algebra.size:
            raise StructuralError("one component list per atom is required")
        for i, comps in enumerate(self.components):
            if list(comps) != _merge_run(comps):
                raise OrderingError(
                    f"components at atom {self.algebra.labels[i]!r} are not canonical"
                )

    @property
    def living(self) -> Event:
        mask = 0
        for i, comps in enumerate(self.components):
            if comps:
                mask |= 1 << i
        return Event(self.algebra, mask)

    def components_at(self, atom_index: int) -> tuple[RationalInterval, ...]:
        return self.components[atom_index]

    def contains(self, atom_index: int, q: Fraction) -> bool:
        return any(iv.contains(q) for iv in self.components[atom_index])


def canonicalize(
    algebra: EventAlgebra, raw: Mapping[int, Sequence[RationalInterval]]
) -> ConditionalIntervalSet:
    """Sort and merge raw per-atom interval lists into canonical form.

    Intervals merge when they overlap or touch at a point one of them
    includes; two open ends meeting at the same point stay separate.
    """
    comps: list[tuple[RationalInterval, ...]] = [()] * algebra.size
    for i, ivs in raw.items():
        if not 0 <= i < algebra.size:
            raise DomainError(f"atom index {i} outside the algebra")
        comps[i] = tuple(_merge_run(ivs))
    return ConditionalIntervalSet(algebra, tuple(comps))


@dataclass(frozen=True)
class GapRecord:
    """The k-th interior gap of a conditional interval set.

    Lives on the atoms with at least k+2 components.  The five shape
    events partition the living event; a degenerate gap counts as a
    singleton, not as closed.
    """

    index: int
    intervals: Mapping[int, RationalInterval]
    closed_on: Event
    left_closed_on: Event
    right_closed_on: Event
    open_on: Event
    singleton_on: Event

    @property
    def living(self) -> Event:
        return (
            self.closed_on
            | self.left_closed_on
            | self.right_closed_on
            | self.open_on
            | self.singleton_on
        )

    def shape_at(self, atom_index: int) -> str:
        return self.intervals[atom_index].shape()


_SHAPE_FIELDS = {
    "closed": "closed_on",
    "left-closed": "left_closed_on",
    "right-closed": "right_closed_on",
    "open": "open_on",
    "singleton": "singleton_on",
}


def _gap_between(left: RationalInterval, right: RationalInterval) -> RationalInterval:
    # Interior neighbours always have finite facing endpoints.
    assert left.hi is not None and right.lo is not None
    return RationalInterval(
        left.hi, right.lo, not left.hi_closed, not right.lo_closed
    )


def find_gaps(s: ConditionalIntervalSet) -> list[GapRecord]:
    """All interior gaps, aligned across atoms by component index."""
    algebra = s.algebra
    max_gaps = max(
        (len(comps) - 1 for comps in s.components if comps), default=0
    )
    records = []
    for k in range(max_gaps):
        intervals: dict[int, RationalInterval] = {}
        masks = {shape: 0 for shape in _SHAPE_FIELDS}
        for i, comps in enumerate(s.components):
            if len(comps) >= k + 2:
                gap = _gap_between(comps[k], comps[k + 1])
                intervals[i] = gap
                masks[gap.shape()] |= 1 << i
        records.append(
            GapRecord(
                index=k,
                intervals=intervals,
                **{
                    field: Event(algebra, masks[shape])
                    for shape, field in _SHAPE_FIELDS.items()
                },
            )
        )
    return records


@dataclass(frozen=True)
class PiecewiseMap:
    """A strictly increasing piecewise affine map, one piece list per atom.

    Each piece is (source interval, a, b) and sends q to a*q + b.  Pieces
    are kept in source order and the images never step backwards, so the
    map is strictly increasing on its whole domain.
    """

    algebra: EventAlgebra
    pieces: tuple[tuple[tuple[RationalInterval, Fraction, Fraction], ...], ...]

    def __post_init__(self) -> None:
        if len(self.pieces) != self.algebra.size:
            raise StructuralError("one piece list per atom is required")
        for i, plist in enumerate(self.pieces):
            for (src, a, b) in plist:
                if a <= 0:
                    raise OrderingError("piece slopes must be positive")
            for (src1, a1, b1), (src2, a2, b2) in zip(plist, plist[1:]):
                if src1.hi is None or src2.lo is None:
                    raise OrderingError("interior piece sources must be bounded")
                if src1.hi_value > src2.lo_value:
                    raise OrderingError("piece sources overlap")
                img_hi = a1 * src1.hi + b1
                img_lo = a2 * src2.lo + b2
                if img_hi > img_lo or (
                    img_hi == img_lo and src1.hi_closed and src2.lo_closed
                ):
                    raise OrderingError(
                        f"map is not strictly increasing between pieces at atom "
                        f"{self.algebra.labels[i]!r}"
                    )

    def apply(self, atom_index: int, q) -> Fraction:
        f = Fraction(q)
        for src, a, b in self.pieces[atom_index]:
            if src.contains(f):
                return a * f + b
        raise DomainError(
            f"{f} is outside the map's domain at atom "
            f"{self.algebra.labels[atom_index]!r}"
        )

    def apply_rational(self, q: ConditionalRational) -> ConditionalRational:
        return ConditionalRational(
            self.algebra,
            tuple(self.apply(i, q.value_at(i)) for i in range(self.algebra.size)),
        )

    def apply_table(self, table: UtilityTable) -> UtilityTable:
        return UtilityTable(
            self.algebra,
            tuple(
                {v: self.apply(i, q) for v, q in t.items()}
                for i, t in enumerate(table.tables)
            ),
        )

def gap_normalize(
    s: ConditionalIntervalSet,
) -> tuple[PiecewiseMap, ConditionalIntervalSet]:
    """Repair the gaps of s with a strictly increasing piecewise affine map.

    Works atom by atom, scanning components left to right and accumulating
    a translation.  A gap whose endpoints both belong to s is kept open; a
    gap with at most one endpoint in s is closed up completely, which
    either merges the neighbouring components (one endpoint present) or
    leaves a single missing point between them (no endpoint present).
    """
    algebra = s.algebra
    all_pieces: list[tuple[tuple[RationalInterval, Fraction, Fraction], ...]] = []
    image_raw: dict[int, list[RationalInterval]] = {}
    one = Fraction(1)
    for i, comps in enumerate(s.components):
        offset = Fraction(0)
        plist: list[tuple[RationalInterval, Fraction, Fraction]] = []
        imgs: list[RationalInterval] = []
        for j, comp in enumerate(comps):
            if j > 0:
                prev = comps[j - 1]
                both_attained = prev.hi_closed and comp.lo_closed
                if not both_attained:
                    # prev.hi and comp.lo are finite: interior neighbours.
                    offset -= comp.lo - prev.hi  # type: ignore[operator]
            plist.append((comp, one, offset))
            imgs.append(comp.affine(one, offset))
        all_pieces.append(tuple(plist))
        image_raw[i] = imgs
    pmap = PiecewiseMap(algebra, tuple(all_pieces))
    return pmap, canonicalize(algebra, image_raw)


def interval_set_of_points(
    algebra: EventAlgebra, points: Sequence[Sequence[Fraction]]
) -> ConditionalIntervalSet:
    """The conditional interval set of isolated points, one list per atom."""
    return canonicalize(
        algebra,
        {i: [RationalInterval.point(q) for q in ps] for i, ps in enumerate(points)},
    )


# ---------------------------------------------------------------------------
# midpoint embedding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MidpointEmbedding:
    """Dyadic images of a finite conditional family, indexable conditionally."""

    algebra: EventAlgebra
    values: tuple[ConditionalRational, ...]

    def at(self, n: ConditionalNatural) -> ConditionalRational:
        """Evaluate at a conditional index; commutes with index pasting."""
        if n.algebra != self.algebra:
            raise StructuralError("index lives on a different algebra")
        if not n.one_based:
            raise DomainError("midpoint embeddings are indexed from 1")
        out = []
        for i in range(self.algebra.size):
            k = n.value_at(i)
            if k > len(self.values):
                raise DomainError(f"index {k} exceeds the family size {len(self.values)}")
            out.append(self.values[k - 1].value_at(i))
        return ConditionalRational(self.algebra, tuple(out))


def midpoint_embedding(chain: Sequence[ConditionalRational]) -> MidpointEmbedding:
    """Embed a finite family order-isomorphically into the dyadics in [0, 1].

    The first member maps to 1/2 and each later member maps to the average
    of the largest image below it and the smallest image above it among
    the members already placed, with 0 standing in when nothing is below
    and 1 when nothing is above.  Per-atom values must be pairwise
    distinct, otherwise the images could not stay an order isomorphism.
    """
    if not chain:
        raise StructuralError("midpoint embedding needs at least one member")
    algebra = chain[0].algebra
    if any(u.algebra != algebra for u in chain):
        raise StructuralError("chain members must share one algebra")
    per_atom: list[list[Fraction]] = []
    for i in range(algebra.size):
        xs = [u.value_at(i) for u in chain]
        if len(set(xs)) != len(xs):
            raise PreconditionError(
                f"chain values at atom {algebra.labels[i]!r} are not pairwise distinct"
            )
        fs: list[Fraction] = []
        for k, x in enumerate(xs):
            below = [fs[l] for l in range(k) if xs[l] < x]
            above = [fs[l] for l in range(k) if xs[l] > x]
            lo = max(below) if below else Fraction(0)
            hi = min(above) if above else Fraction(1)
            fs.append((lo + hi) / 2)
        per_atom.append(fs)
    values = tuple(
        ConditionalRational(algebra, tuple(per_atom[i][k] for i in range(algebra.size)))
        for k in range(len(chain))
    )
    return MidpointEmbedding(algebra, values)


# ---------------------------------------------------------------------------
# upper-semicontinuity upgrade
# ---------------------------------------------------------------------------


def usc_upgrade(table: UtilityTable, pref: ConditionalPreference) -> UtilityTable:
    """Compose a representing table with the gap repair of its image.

    The input must already represent the preference.  The output is
    order-equivalent to it and its image only has absent, singleton, or
    open gaps, so upper contour sets pull back to conditionally closed
    half-lines.
    """
    report = verify_representation(table, pref)
    if not report.ok:
        raise PreconditionError(
            f"table does not represent the preference: {report.describe()}"
        )
    image = interval_set_of_points(
        table.algebra, [table.image_at(i) for i in range(table.algebra.size)]
    )
    g, _ = gap_normalize(image)
    upgraded = g.apply_table(table)
    check = verify_representation(upgraded, pref)
    if not check.ok:
        raise StructuralError(
            f"gap repair broke the representation: {check.describe()}"
        )
    return upgraded
