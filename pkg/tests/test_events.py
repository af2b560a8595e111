"""Bitmask events checked against a frozenset-of-indices model."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from condpref import Atom, Coarsening, Event, EventAlgebra, is_partition, largest_event
from condpref.errors import ConfigurationError, StructuralError

ABC = EventAlgebra(("a", "b", "c"))
MASKS = st.integers(0, ABC.omega.mask)


def model(event: Event) -> frozenset:
    """The set of atom indices; the oracle for every lattice operation."""
    return frozenset(event)


class TestConstruction:
    def test_needs_at_least_one_atom(self):
        with pytest.raises(ConfigurationError):
            EventAlgebra(())

    def test_atom_limit(self):
        EventAlgebra(tuple(f"a{i}" for i in range(16)))
        with pytest.raises(ConfigurationError):
            EventAlgebra(tuple(f"a{i}" for i in range(17)))

    def test_labels_must_be_distinct(self):
        with pytest.raises(ConfigurationError):
            EventAlgebra(("x", "y", "x"))

    def test_mask_out_of_range(self):
        with pytest.raises(StructuralError):
            Event(ABC, 1 << 3)
        with pytest.raises(StructuralError):
            Event(ABC, -1)

    def test_of_size(self):
        alg = EventAlgebra.of_size(3)
        assert alg.labels == ("a0", "a1", "a2")
        assert EventAlgebra.of_size(2, prefix="w").labels == ("w0", "w1")

    def test_atoms(self):
        assert ABC.atoms == (Atom(0, "a"), Atom(1, "b"), Atom(2, "c"))
        assert ABC.size == 3

    def test_omega_and_empty(self):
        assert ABC.omega.mask == 0b111
        assert ABC.empty.mask == 0
        assert ABC.omega.is_omega and not ABC.omega.is_empty
        assert ABC.empty.is_empty and not ABC.empty.is_omega

    def test_atom_event(self):
        assert ABC.atom_event(1).labels() == ("b",)
        with pytest.raises(ConfigurationError):
            ABC.atom_event(3)
        with pytest.raises(ConfigurationError):
            ABC.atom_event(-1)

    def test_event_from_labels(self):
        assert ABC.event(["c", "a"]).mask == 0b101
        assert ABC.event([]).is_empty
        with pytest.raises(ConfigurationError):
            ABC.event(["nope"])

    def test_all_events_enumerates_the_powerset(self):
        events = list(ABC.all_events())
        assert len(events) == 8
        assert len({e.mask for e in events}) == 8


class TestLattice:
    @given(MASKS, MASKS)
    def test_intersection(self, m, n):
        x, y = ABC.from_mask(m), ABC.from_mask(n)
        assert model(x & y) == model(x) & model(y)

    @given(MASKS, MASKS)
    def test_union(self, m, n):
        x, y = ABC.from_mask(m), ABC.from_mask(n)
        assert model(x | y) == model(x) | model(y)

    @given(MASKS, MASKS)
    def test_difference(self, m, n):
        x, y = ABC.from_mask(m), ABC.from_mask(n)
        assert model(x - y) == model(x) - model(y)

    @given(MASKS)
    def test_complement(self, m):
        x = ABC.from_mask(m)
        assert model(~x) == model(ABC.omega) - model(x)
        assert (~~x).mask == x.mask

    @given(MASKS, MASKS)
    def test_le_is_containment(self, m, n):
        x, y = ABC.from_mask(m), ABC.from_mask(n)
        assert (x <= y) == (model(x) <= model(y))
        assert (x < y) == (model(x) < model(y))

    @given(MASKS)
    def test_complement_partitions_omega(self, m):
        x = ABC.from_mask(m)
        assert is_partition([x, ~x])

    def test_cross_algebra_operations_refused(self):
        other = EventAlgebra(("x", "y"))
        with pytest.raises(StructuralError):
            ABC.omega & other.omega
        with pytest.raises(StructuralError):
            ABC.omega | other.omega
        with pytest.raises(StructuralError):
            ABC.omega <= other.omega


class TestInspection:
    @given(MASKS)
    def test_len_iter_contains_agree(self, m):
        x = ABC.from_mask(m)
        indices = model(x)
        assert len(x) == len(indices)
        assert all(i in x for i in indices)
        assert all(i not in x for i in {0, 1, 2} - indices)
        assert bool(x) == bool(indices)

    def test_labels_are_sorted(self):
        assert ABC.from_mask(0b110).labels() == ("b", "c")
        assert ABC.from_mask(0).labels() == ()

    def test_repr_names_the_atoms(self):
        assert repr(ABC.from_mask(0b101)) == "Event({a, c})"


class TestHelpers:
    @given(MASKS)
    def test_largest_event_recovers_any_predicate(self, m):
        x = ABC.from_mask(m)
        got = largest_event(ABC, lambda atom: atom.index in x)
        assert got.mask == x.mask

    def test_largest_event_by_label(self):
        got = largest_event(ABC, lambda atom: atom.label in ("a", "c"))
        assert got.labels() == ("a", "c")

    def test_is_partition(self):
        a, b, c = (ABC.atom_event(i) for i in range(3))
        assert is_partition([a, b, c])
        assert is_partition([a | b, c])
        assert is_partition([ABC.omega, ABC.empty])  # empty cells are fine
        assert not is_partition([a, a | b, c])  # overlap
        assert not is_partition([a, b])  # does not cover
        assert not is_partition([])


class TestCoarsening:
    FINE = EventAlgebra(("f0", "f1", "f2", "f3"))
    COARSE = EventAlgebra(("c0", "c1"))

    def make(self):
        return Coarsening(self.FINE, self.COARSE, (0, 0, 1, 0))

    def test_blocks(self):
        co = self.make()
        assert co.block(0) == (0, 1, 3)
        assert co.block(1) == (2,)

    def test_lift(self):
        co = self.make()
        assert co.lift(self.COARSE.atom_event(0)).labels() == ("f0", "f1", "f3")
        assert co.lift(self.COARSE.omega).is_omega
        assert co.lift(self.COARSE.empty).is_empty

    def test_lift_requires_a_coarse_event(self):
        co = self.make()
        with pytest.raises(StructuralError):
            co.lift(self.FINE.atom_event(0))

    def test_block_of_must_cover(self):
        with pytest.raises(StructuralError):
            Coarsening(self.FINE, self.COARSE, (0, 0, 0))  # wrong length
        with pytest.raises(StructuralError):
            Coarsening(self.FINE, self.COARSE, (0, 0, 2, 0))  # out of range
        with pytest.raises(StructuralError):
            Coarsening(self.FINE, self.COARSE, (0, 0, 0, 0))  # c1 never hit
