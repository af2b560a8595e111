"""Conditional elements, subsets, rationals, and the locality checker."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from condpref import (
    Coarsening,
    ConditionalElement,
    ConditionalNatural,
    ConditionalRational,
    ConditionalSubset,
    EventAlgebra,
    check_locality,
    concatenate,
    cond_complement,
    cond_intersection,
    cond_union,
    entropic_certainty_equivalent,
    q_abs,
    q_add,
    q_leq,
    q_mul,
    seq_index,
)
from condpref.errors import ConfigurationError, DomainError, StructuralError

from strategies import (
    GROUND_POOL,
    algebra_and_rationals,
    ambient_with_subsets,
    masks,
    small_fractions,
)

ABC = EventAlgebra(("a", "b", "c"))


# ---------------------------------------------------------------------------
# conditional elements
# ---------------------------------------------------------------------------


class TestConditionalElement:
    def test_from_map_and_value_at(self):
        x = ConditionalElement.from_map(ABC, {0: "p", 2: "q"})
        assert x.living.labels() == ("a", "c")
        assert x.value_at(0) == "p"
        assert x.value_at(2) == "q"
        assert x.as_dict() == {0: "p", 2: "q"}

    def test_value_at_dead_atom(self):
        x = ConditionalElement.from_map(ABC, {0: "p"})
        with pytest.raises(DomainError):
            x.value_at(1)

    def test_from_map_index_out_of_range(self):
        with pytest.raises(DomainError):
            ConditionalElement.from_map(ABC, {3: "p"})

    def test_everywhere(self):
        x = ConditionalElement.everywhere(ABC, 7)
        assert x.living.is_omega
        assert all(x.value_at(i) == 7 for i in range(3))

    def test_values_must_match_living(self):
        with pytest.raises(StructuralError):
            ConditionalElement(ABC.omega, ("p", "q"))

    def test_restrict(self):
        x = ConditionalElement(ABC.omega, ("p", "q", "r"))
        y = x.restrict(ABC.event(["a", "c"]))
        assert y.as_dict() == {0: "p", 2: "r"}

    def test_restrict_beyond_living(self):
        x = ConditionalElement.from_map(ABC, {0: "p"})
        with pytest.raises(DomainError):
            x.restrict(ABC.event(["a", "b"]))

    @given(masks(ABC))
    def test_restrict_then_concatenate_is_identity(self, m):
        x = ConditionalElement(ABC.omega, ("p", "q", "r"))
        a = ABC.from_mask(m)
        glued = concatenate([(a, x.restrict(a)), (~a, x.restrict(~a))])
        assert glued == x

    def test_repr_shows_values_and_atoms(self):
        x = ConditionalElement.from_map(ABC, {1: "q"})
        assert repr(x) == "'q'|b"
        assert repr(ConditionalElement.from_map(ABC, {})) == "ConditionalElement(nowhere)"


class TestConcatenate:
    def test_pastes_along_a_partition(self):
        x = ConditionalElement.everywhere(ABC, "x")
        y = ConditionalElement.everywhere(ABC, "y")
        a = ABC.event(["b"])
        glued = concatenate([(a, x), (~a, y)])
        assert glued.as_dict() == {0: "y", 1: "x", 2: "y"}

    def test_partial_union(self):
        x = ConditionalElement.everywhere(ABC, "x")
        glued = concatenate([(ABC.event(["a"]), x)])
        assert glued.living.labels() == ("a",)

    def test_overlap_refused(self):
        x = ConditionalElement.everywhere(ABC, "x")
        with pytest.raises(StructuralError):
            concatenate([(ABC.event(["a", "b"]), x), (ABC.event(["b"]), x)])

    def test_no_pieces_refused(self):
        with pytest.raises(StructuralError):
            concatenate([])

    def test_piece_must_live_on_its_event(self):
        x = ConditionalElement.from_map(ABC, {0: "x"})
        with pytest.raises(DomainError):
            concatenate([(ABC.event(["a", "b"]), x)])

    def test_mixed_algebras_refused(self):
        other = EventAlgebra(("z",))
        x = ConditionalElement.everywhere(ABC, "x")
        y = ConditionalElement.everywhere(other, "y")
        with pytest.raises(StructuralError):
            concatenate([(ABC.event(["a"]), x), (ABC.event(["b"]), y)])


# ---------------------------------------------------------------------------
# conditional subsets and their Boolean laws
# ---------------------------------------------------------------------------


class TestConditionalSubset:
    def test_living_is_derived(self):
        s = ConditionalSubset.from_map(ABC, {0: ["p"], 2: ["q", "r"]})
        assert s.living.labels() == ("a", "c")
        assert s.members_at(0) == {"p"}
        assert s.members_at(1) == frozenset()

    def test_uniform(self):
        s = ConditionalSubset.uniform(ABC, ["p", "q"])
        assert s.living.is_omega
        assert all(s.members_at(i) == {"p", "q"} for i in range(3))

    def test_one_set_per_atom_required(self):
        with pytest.raises(StructuralError):
            ConditionalSubset(ABC, (frozenset(),))

    def test_from_map_index_out_of_range(self):
        with pytest.raises(DomainError):
            ConditionalSubset.from_map(ABC, {5: ["p"]})

    def test_restrict(self):
        s = ConditionalSubset.uniform(ABC, ["p"])
        r = s.restrict(ABC.event(["b"]))
        assert r.living.labels() == ("b",)
        with pytest.raises(StructuralError):
            s.restrict(EventAlgebra(("z",)).omega)

    def test_is_subset_of(self):
        small = ConditionalSubset.from_map(ABC, {0: ["p"]})
        big = ConditionalSubset.from_map(ABC, {0: ["p", "q"], 1: ["r"]})
        assert small.is_subset_of(big)
        assert not big.is_subset_of(small)

    def test_contains_element(self):
        s = ConditionalSubset.from_map(ABC, {0: ["p", "q"], 1: ["r"]})
        inside = ConditionalElement.from_map(ABC, {0: "q", 1: "r"})
        outside_value = ConditionalElement.from_map(ABC, {0: "z"})
        outside_event = ConditionalElement.from_map(ABC, {2: "p"})
        assert s.contains_element(inside)
        assert not s.contains_element(outside_value)
        assert not s.contains_element(outside_event)

    def test_repr(self):
        s = ConditionalSubset.from_map(ABC, {1: ["q", "p"]})
        assert repr(s) == "{p,q}|b"


class TestBooleanLaws:
    """The per-atom set model is the oracle for every operation."""

    @given(ambient_with_subsets(n=2))
    def test_union_and_intersection_model(self, drawn):
        ambient, y, z = drawn
        u = cond_union(y, z)
        m = cond_intersection(y, z)
        for i in range(ambient.algebra.size):
            assert u.members_at(i) == y.members_at(i) | z.members_at(i)
            assert m.members_at(i) == y.members_at(i) & z.members_at(i)

    @given(ambient_with_subsets(n=1))
    def test_complement_model(self, drawn):
        ambient, y = drawn
        c = cond_complement(y, ambient)
        for i in range(ambient.algebra.size):
            assert c.members_at(i) == ambient.members_at(i) - y.members_at(i)

    @given(ambient_with_subsets(n=1))
    def test_double_complement_is_exact(self, drawn):
        ambient, y = drawn
        assert cond_complement(cond_complement(y, ambient), ambient) == y

    @given(ambient_with_subsets(n=2))
    def test_de_morgan(self, drawn):
        ambient, y, z = drawn
        comp = lambda s: cond_complement(s, ambient)
        assert comp(cond_union(y, z)) == cond_intersection(comp(y), comp(z))
        assert comp(cond_intersection(y, z)) == cond_union(comp(y), comp(z))

    @given(ambient_with_subsets(n=3))
    def test_distributivity(self, drawn):
        ambient, y, z, w = drawn
        assert cond_intersection(y, cond_union(z, w)) == cond_union(
            cond_intersection(y, z), cond_intersection(y, w)
        )
        assert cond_union(y, cond_intersection(z, w)) == cond_intersection(
            cond_union(y, z), cond_union(y, w)
        )

    @given(ambient_with_subsets(n=2))
    def test_absorption(self, drawn):
        ambient, y, z = drawn
        assert cond_union(y, cond_intersection(y, z)) == y
        assert cond_intersection(y, cond_union(y, z)) == y

    @given(ambient_with_subsets(n=1))
    def test_excluded_middle_reaches_the_ambient_set(self, drawn):
        ambient, y = drawn
        assert cond_union(y, cond_complement(y, ambient)) == ambient
        dead = cond_intersection(y, cond_complement(y, ambient))
        assert dead.living.is_empty

    @given(ambient_with_subsets(n=1))
    def test_operator_sugar(self, drawn):
        ambient, y = drawn
        assert (y | ambient) == cond_union(y, ambient)
        assert (y & ambient) == cond_intersection(y, ambient)

    def test_complement_requires_containment(self):
        y = ConditionalSubset.uniform(ABC, ["z"])
        ambient = ConditionalSubset.uniform(ABC, ["p", "q"])
        with pytest.raises(DomainError):
            cond_complement(y, ambient)

    def test_mixed_algebras_refused(self):
        other = EventAlgebra(("z",))
        with pytest.raises(StructuralError):
            cond_union(
                ConditionalSubset.uniform(ABC, ["p"]),
                ConditionalSubset.uniform(other, ["p"]),
            )

    @given(ambient_with_subsets(n=2), st.data())
    def test_union_is_stable_under_pasting(self, drawn, data):
        """Computing on a paste equals pasting the per-piece computations."""
        ambient, y, z = drawn
        algebra = ambient.algebra
        a = algebra.from_mask(data.draw(masks(algebra)))
        pasted_inputs = cond_union(
            cond_union(y.restrict(a), y.restrict(~a)),
            cond_union(z.restrict(a), z.restrict(~a)),
        )
        whole = cond_union(y, z)
        assert pasted_inputs == whole


# ---------------------------------------------------------------------------
# conditional rationals and naturals
# ---------------------------------------------------------------------------


class TestConditionalRational:
    def test_requires_fractions(self):
        with pytest.raises(StructuralError):
            ConditionalRational(ABC, (0.5, 0.5, 0.5))
        with pytest.raises(StructuralError):
            ConditionalRational(ABC, (Fraction(1), Fraction(2)))

    def test_constructors(self):
        c = ConditionalRational.constant(ABC, "1/3")
        assert c.values == (Fraction(1, 3),) * 3
        v = ConditionalRational.from_values(ABC, [1, "2/5", Fraction(3)])
        assert v.values == (Fraction(1), Fraction(2, 5), Fraction(3))

    def test_from_pieces(self):
        q = ConditionalRational.from_values(ABC, [1, 2, 3])
        r = ConditionalRational.from_values(ABC, [4, 5, 6])
        a = ABC.event(["b"])
        glued = ConditionalRational.from_pieces([(a, q), (~a, r)])
        assert glued.values == (Fraction(4), Fraction(2), Fraction(6))

    def test_from_pieces_must_partition(self):
        q = ConditionalRational.constant(ABC, 0)
        with pytest.raises(StructuralError):
            ConditionalRational.from_pieces([(ABC.event(["a"]), q)])
        with pytest.raises(StructuralError):
            ConditionalRational.from_pieces(
                [(ABC.omega, q), (ABC.event(["a"]), q)]
            )

    @given(algebra_and_rationals(n=2))
    def test_arithmetic_is_atomwise(self, drawn):
        algebra, q, r = drawn
        for i in range(algebra.size):
            assert (q + r).value_at(i) == q.value_at(i) + r.value_at(i)
            assert (q - r).value_at(i) == q.value_at(i) - r.value_at(i)
            assert (q * r).value_at(i) == q.value_at(i) * r.value_at(i)
            assert (-q).value_at(i) == -q.value_at(i)
            assert abs(q).value_at(i) == abs(q.value_at(i))

    @given(algebra_and_rationals(n=2))
    def test_comparison_events_are_maximal(self, drawn):
        algebra, q, r = drawn
        leq, lt, eq = q.leq_event(r), q.lt_event(r), q.eq_event(r)
        for i in range(algebra.size):
            assert (i in leq) == (q.value_at(i) <= r.value_at(i))
            assert (i in lt) == (q.value_at(i) < r.value_at(i))
            assert (i in eq) == (q.value_at(i) == r.value_at(i))
        assert leq.mask == (lt | eq).mask

    @given(algebra_and_rationals(n=2))
    def test_module_level_wrappers(self, drawn):
        algebra, q, r = drawn
        assert q_add(q, r) == q + r
        assert q_mul(q, r) == q * r
        assert q_abs(q) == abs(q)
        assert q_leq(q, r).mask == q.leq_event(r).mask

    @given(algebra_and_rationals(n=2))
    def test_leq_complement_carries_the_strict_reverse(self, drawn):
        algebra, q, r = drawn
        assert (~q_leq(q, r)).mask == r.lt_event(q).mask

    def test_scale_and_max_abs(self):
        q = ConditionalRational.from_values(ABC, [-3, 1, 2])
        assert q.scale("1/2").values == (Fraction(-3, 2), Fraction(1, 2), Fraction(1))
        assert q.max_abs() == Fraction(3)

    def test_mixed_algebras_refused(self):
        other = ConditionalRational.constant(EventAlgebra(("z",)), 0)
        with pytest.raises(StructuralError):
            ConditionalRational.constant(ABC, 0) + other


class TestConditionalNatural:
    def test_one_based_floor(self):
        ConditionalNatural(ABC, (1, 2, 3))
        with pytest.raises(ConfigurationError):
            ConditionalNatural(ABC, (0, 1, 2))

    def test_zero_based(self):
        n = ConditionalNatural(ABC, (0, 1, 2), one_based=False)
        assert n.value_at(0) == 0

    def test_one_index_per_atom(self):
        with pytest.raises(StructuralError):
            ConditionalNatural(ABC, (1, 2))

    def test_integers_only(self):
        with pytest.raises(ConfigurationError):
            ConditionalNatural(ABC, (1, 2, 2.5))


class TestSeqIndex:
    SEQ = {
        1: ConditionalElement.everywhere(ABC, "first"),
        2: ConditionalElement.everywhere(ABC, "second"),
    }

    def test_constant_index_selects_one_member(self):
        n = ConditionalNatural(ABC, (2, 2, 2))
        assert seq_index(self.SEQ, n) == self.SEQ[2]

    def test_mixed_index_concatenates_over_level_sets(self):
        n = ConditionalNatural(ABC, (1, 2, 1))
        got = seq_index(self.SEQ, n)
        assert got.as_dict() == {0: "first", 1: "second", 2: "first"}

    @given(masks(ABC))
    def test_commutes_with_index_pasting(self, m):
        a = ABC.from_mask(m)
        n = ConditionalNatural(ABC, tuple(1 if i in a else 2 for i in range(3)))
        got = seq_index(self.SEQ, n)
        expected_pieces = []
        if a:
            expected_pieces.append((a, self.SEQ[1]))
        if ~a:
            expected_pieces.append((~a, self.SEQ[2]))
        assert got == concatenate(expected_pieces)

    def test_missing_index(self):
        n = ConditionalNatural(ABC, (1, 3, 1))
        with pytest.raises(DomainError):
            seq_index(self.SEQ, n)

    def test_member_must_live_where_selected(self):
        seq = {1: ConditionalElement.from_map(ABC, {0: "only-a"})}
        n = ConditionalNatural(ABC, (1, 1, 1))
        with pytest.raises(DomainError):
            seq_index(seq, n)

    def test_member_algebra_must_match(self):
        seq = {1: ConditionalElement.everywhere(EventAlgebra(("z",)), "x")}
        n = ConditionalNatural(ABC, (1, 1, 1))
        with pytest.raises(StructuralError):
            seq_index(seq, n)


# ---------------------------------------------------------------------------
# locality
# ---------------------------------------------------------------------------


def _square(x: ConditionalElement) -> ConditionalElement:
    """A local map: squares every value independently."""
    return ConditionalElement(x.living, tuple(v * v for v in x.values))


def _peeking(x: ConditionalElement) -> ConditionalElement:
    """A nonlocal map: every output value copies the first living value."""
    first = x.values[0]
    return ConditionalElement(x.living, (first,) * len(x.values))


class TestCheckLocality:
    X = ConditionalElement(ABC.omega, (2, 3, 5))
    Y = ConditionalElement(ABC.omega, (7, 11, 13))
    SAMPLES = [
        (X, Y, ABC.event(["a"])),
        (X, Y, ABC.event(["a", "c"])),
        (Y, X, ABC.omega),
        (X, X, ABC.empty),
    ]

    def test_local_map_passes(self):
        report = check_locality(_square, self.SAMPLES)
        assert report.ok
        assert report.samples_checked == len(self.SAMPLES)

    def test_nonlocal_map_is_caught(self):
        report = check_locality(_peeking, self.SAMPLES)
        assert not report.ok
        v = report.violations[0]
        assert v.sample_index == 0
        assert v.atom_label in ("b", "c")
        assert v.got != v.expected

    def test_tolerance_admits_small_numeric_drift(self):
        def jitter(x):
            return ConditionalElement(x.living, tuple(float(v) + 1e-9 * v for v in x.values))

        exact = check_locality(jitter, self.SAMPLES)
        loose = check_locality(jitter, self.SAMPLES, tolerance=1e-6)
        assert not exact.ok
        assert loose.ok


class TestEntropicCertaintyEquivalent:
    FINE = EventAlgebra(("f0", "f1", "f2", "f3"))
    COARSE = EventAlgebra(("c0", "c1"))
    CO = Coarsening(FINE, COARSE, (0, 0, 1, 1))

    def test_weights_validated(self):
        with pytest.raises(ConfigurationError):
            entropic_certainty_equivalent(self.CO, [1.0, 1.0])
        with pytest.raises(ConfigurationError):
            entropic_certainty_equivalent(self.CO, [1.0, 0.0, 1.0, 1.0])

    def test_constant_inputs_are_fixed_points(self):
        f = entropic_certainty_equivalent(self.CO, [1.0, 2.0, 3.0, 4.0])
        got = f(ConditionalElement.everywhere(self.FINE, 1.5))
        assert got.living.is_omega
        for i in range(2):
            assert got.value_at(i) == pytest.approx(1.5)

    def test_known_value(self):
        # equal weights, values 0 and ln 3: log((1 + 3) / 2) = log 2
        f = entropic_certainty_equivalent(self.CO, [1.0, 1.0, 1.0, 1.0])
        x = ConditionalElement(self.FINE.omega, (0.0, math.log(3), 0.0, 0.0))
        assert f(x).value_at(0) == pytest.approx(math.log(2))

    def test_partial_blocks_are_dropped(self):
        f = entropic_certainty_equivalent(self.CO, [1.0, 1.0, 1.0, 1.0])
        x = ConditionalElement.from_map(self.FINE, {0: 1.0, 1: 1.0, 2: 1.0})
        got = f(x)  # block c1 is only half-covered
        assert got.living.labels() == ("c0",)

    def test_requires_the_fine_algebra(self):
        f = entropic_certainty_equivalent(self.CO, [1.0, 1.0, 1.0, 1.0])
        with pytest.raises(StructuralError):
            f(ConditionalElement.everywhere(self.COARSE, 1.0))

    def test_local_with_respect_to_lifted_events(self):
        f = entropic_certainty_equivalent(self.CO, [1.0, 2.0, 3.0, 4.0])
        x = ConditionalElement.everywhere(self.FINE, 0.25)
        y = ConditionalElement(self.FINE.omega, (1.0, -1.0, 2.0, 0.5))
        samples = [
            (x, y, self.COARSE.atom_event(0)),
            (x, y, self.COARSE.atom_event(1)),
            (y, x, self.COARSE.omega),
        ]
        report = check_locality(f, samples, lift=self.CO.lift, tolerance=1e-12)
        assert report.ok
