"""Shared hypothesis strategies for conditional structures."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from condpref import (
    ConditionalElement,
    ConditionalPreference,
    ConditionalRational,
    ConditionalSubset,
    EventAlgebra,
)

GROUND_POOL = ("p", "q", "r", "s")


def algebras(max_atoms: int = 4) -> st.SearchStrategy[EventAlgebra]:
    return st.integers(1, max_atoms).map(EventAlgebra.of_size)


def masks(algebra: EventAlgebra) -> st.SearchStrategy[int]:
    return st.integers(0, algebra.omega.mask)


def events(algebra: EventAlgebra):
    return masks(algebra).map(algebra.from_mask)


small_fractions = st.fractions(min_value=-8, max_value=8, max_denominator=16)


@st.composite
def algebra_and_events(draw, n: int = 1, max_atoms: int = 4):
    algebra = draw(algebras(max_atoms))
    return (algebra, *[draw(events(algebra)) for _ in range(n)])


@st.composite
def rationals(draw, algebra: EventAlgebra) -> ConditionalRational:
    values = [draw(small_fractions) for _ in range(algebra.size)]
    return ConditionalRational(algebra, tuple(Fraction(v) for v in values))


@st.composite
def algebra_and_rationals(draw, n: int = 2, max_atoms: int = 4):
    algebra = draw(algebras(max_atoms))
    return (algebra, *[draw(rationals(algebra)) for _ in range(n)])


@st.composite
def subsets(draw, algebra: EventAlgebra, pool=GROUND_POOL) -> ConditionalSubset:
    sets = [draw(st.frozensets(st.sampled_from(pool))) for _ in range(algebra.size)]
    return ConditionalSubset(algebra, tuple(sets))


@st.composite
def subsets_in(draw, ambient: ConditionalSubset) -> ConditionalSubset:
    sets = []
    for i in range(ambient.algebra.size):
        members = sorted(ambient.members_at(i))
        sets.append(draw(st.frozensets(st.sampled_from(members)) if members else st.just(frozenset())))
    return ConditionalSubset(ambient.algebra, tuple(sets))


@st.composite
def ambient_with_subsets(draw, n: int = 2, max_atoms: int = 3, pool=GROUND_POOL):
    """An everywhere-living ambient subset plus n subsets inside it."""
    algebra = draw(algebras(max_atoms))
    sets = []
    for _ in range(algebra.size):
        members = draw(st.frozensets(st.sampled_from(pool), min_size=1))
        sets.append(members)
    ambient = ConditionalSubset(algebra, tuple(sets))
    return (ambient, *[draw(subsets_in(ambient)) for _ in range(n)])


@st.composite
def preferences(draw, max_atoms: int = 3, max_values: int = 4) -> ConditionalPreference:
    m = draw(st.integers(1, max_atoms))
    algebra = EventAlgebra.of_size(m)
    rankings = {}
    for i in range(m):
        n = draw(st.integers(1, max_values))
        order = draw(st.permutations([f"v{k}" for k in range(n)]))
        groups = [[order[0]]]
        for v in order[1:]:
            if draw(st.booleans()):
                groups.append([v])
            else:
                groups[-1].append(v)
        rankings[i] = groups
    return ConditionalPreference.from_rankings(algebra, rankings, allow_trivial=True)


@st.composite
def preference_with_elements(draw, n: int = 2, max_atoms: int = 3, max_values: int = 4):
    """A preference plus n total elements picking ranked values."""
    pref = draw(preferences(max_atoms, max_values))
    algebra = pref.algebra
    elements = []
    for _ in range(n):
        values = tuple(
            draw(st.sampled_from(sorted(pref.ground_at(i)))) for i in range(algebra.size)
        )
        elements.append(ConditionalElement(algebra.omega, values))
    return (pref, *elements)
