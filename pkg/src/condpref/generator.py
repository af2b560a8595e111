"""Seeded, portable generation of test instances.

Randomness comes from an in-package SplitMix64 stream: the usual 64-bit
add-xorshift-multiply mixer, implemented over plain Python integers so a
(seed, spec) pair reproduces the same instance on any platform and any
interpreter version.  All drawn quantities are exact rationals on small
dyadic or quarter-integer grids, which keeps downstream comparisons exact
and keeps planted expected-utility differences far above bisection noise.

Three instance families are covered: ranked-ground-set preference
instances with named acts, planted expected-utility indices with random
lotteries and mixture triples, and conditional interval sets.  The
walk/museum fixture (sunny day: prefer the walk; otherwise: prefer the
museum) is provided as a fixed instance rather than a seeded one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .condcore import ConditionalElement, ConditionalRational
from .errors import ConfigurationError
from .events import EventAlgebra
from .gaps import ConditionalIntervalSet, RationalInterval
from .preference import ConditionalPreference
from .representation import WeightScheme
from .vnm import ConditionalLottery, ExpectedUtilityOracle, UtilityIndex, mix

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """The SplitMix64 mixer over plain integers; one stream per seed."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by the multiply-high method."""
        if n < 1:
            raise ConfigurationError("below() needs a positive bound")
        return (self.next_u64() * n) >> 64

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], both ends included."""
        if lo > hi:
            raise ConfigurationError("empty integer range")
        return lo + self.below(hi - lo + 1)

    def bernoulli(self, p: Fraction) -> bool:
        return self.below(p.denominator) < p.numerator

    def choice(self, xs: Sequence):
        return xs[self.below(len(xs))]

    def shuffle(self, xs: list) -> None:
        for i in range(len(xs) - 1, 0, -1):
            j = self.below(i + 1)
            xs[i], xs[j] = xs[j], xs[i]


@dataclass(frozen=True)
class InstanceSpec:
    """Knobs for one generated instance; the seed pins everything."""

    seed: int
    atoms: int
    values_per_atom: tuple[int, int]
    tie_probability: Fraction = Fraction(0)
    lottery_outcomes: int = 3

    def __post_init__(self) -> None:
        if not 0 <= self.seed <= _MASK64:
            raise ConfigurationError("seed must fit in 64 bits")
        if not 1 <= self.atoms <= 16:
            raise ConfigurationError("atoms must lie in [1, 16]")
        if isinstance(self.values_per_atom, int):
            object.__setattr__(
                self, "values_per_atom", (self.values_per_atom, self.values_per_atom)
            )
        lo, hi = self.values_per_atom
        if not 1 <= lo <= hi:
            raise ConfigurationError("values_per_atom must be a nonempty range from 1 up")
        if isinstance(self.tie_probability, float):
            raise ConfigurationError("tie_probability must be exact; pass a Fraction")
        object.__setattr__(self, "tie_probability", Fraction(self.tie_probability))
        if not 0 <= self.tie_probability <= 1:
            raise ConfigurationError("tie_probability must lie in [0, 1]")
        if self.lottery_outcomes < 1:
            raise ConfigurationError("lottery_outcomes must be at least 1")


def atom_labels(m: int) -> tuple[str, ...]:
    return tuple(f"a{i + 1}" for i in range(m))


# ---------------------------------------------------------------------------
# preference instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PreferenceInstance:
    """A ranked ground set per atom plus named total acts over it."""

    algebra: EventAlgebra
    ground: tuple[tuple[str, ...], ...]
    preference: ConditionalPreference
    acts: dict[str, ConditionalElement] = field(compare=False)
    spec: InstanceSpec | None = field(default=None, compare=False)

    def default_weights(self) -> WeightScheme:
        return WeightScheme.halving(self.algebra, self.ground)


def _acts_over(
    algebra: EventAlgebra, ground: tuple[tuple[str, ...], ...]
) -> dict[str, ConditionalElement]:
    """Named total acts cycling through each atom's ground set.

    With as many acts as the largest ground set, every ranked value at
    every atom appears in at least one act.
    """
    width = max(len(g) for g in ground)
    acts = {}
    for j in range(width):
        values = tuple(ground[i][j % len(ground[i])] for i in range(algebra.size))
        acts[f"x{j + 1}"] = ConditionalElement(algebra.omega, values)
    return acts


def generate_preference_instance(spec: InstanceSpec) -> PreferenceInstance:
    """Draw ground sets and per-atom tie-group rankings from the seed.

    Each atom gets between spec.values_per_atom[0] and [1] values named
    from a shared pool, a shuffled order, and tie-group breaks drawn at
    1 - tie_probability.  If every atom comes out as a single tie-group
    the first atom with two values is split so the instance is never
    conditionally trivial; an all-ties spec with one value everywhere
    cannot be repaired and is rejected.
    """
    rng = SplitMix64(spec.seed)
    algebra = EventAlgebra(atom_labels(spec.atoms))
    lo, hi = spec.values_per_atom
    ground = tuple(
        tuple(f"v{k + 1}" for k in range(rng.randint(lo, hi)))
        for _ in range(spec.atoms)
    )
    rankings: list[list[list[str]]] = []
    for values in ground:
        order = list(values)
        rng.shuffle(order)
        groups: list[list[str]] = [[order[0]]]
        for v in order[1:]:
            if rng.bernoulli(spec.tie_probability):
                groups[-1].append(v)
            else:
                groups.append([v])
        rankings.append(groups)
    if all(len(gs) == 1 for gs in rankings):
        splittable = next((i for i, gs in enumerate(rankings) if len(gs[0]) > 1), None)
        if splittable is None:
            raise ConfigurationError(
                "spec admits only the trivial preference "
                "(one value per atom, everything tied)"
            )
        head, *rest = rankings[splittable][0]
        rankings[splittable] = [[head], rest]
    preference = ConditionalPreference.from_rankings(
        algebra, {i: gs for i, gs in enumerate(rankings)}
    )
    return PreferenceInstance(
        algebra, ground, preference, _acts_over(algebra, ground), spec
    )


def walk_museum_instance() -> PreferenceInstance:
    """Two states, two acts: walk beats museum when sunny, else the reverse."""
    algebra = EventAlgebra(("sunny", "sunnyc"))
    ground = (("walk", "museum"), ("walk", "museum"))
    preference = ConditionalPreference.from_rankings(
        algebra,
        {0: [["walk"], ["museum"]], 1: [["museum"], ["walk"]]},
    )
    acts = {
        "walk": ConditionalElement.everywhere(algebra, "walk"),
        "museum": ConditionalElement.everywhere(algebra, "museum"),
    }
    return PreferenceInstance(algebra, ground, preference, acts)


# ---------------------------------------------------------------------------
# planted expected-utility instances
# ---------------------------------------------------------------------------

PLANTED_DENOMINATOR = 1024
LOTTERY_DENOMINATOR = 64


@dataclass(frozen=True)
class VnmInstance:
    """A planted utility index; the oracle it induces is the ground truth."""

    index: UtilityIndex
    spec: InstanceSpec | None = field(default=None, compare=False)

    @property
    def algebra(self) -> EventAlgebra:
        return self.index.algebra

    @property
    def outcomes(self) -> tuple[str, ...]:
        return self.index.outcomes

    def oracle(self) -> ExpectedUtilityOracle:
        return ExpectedUtilityOracle(self.index)


def generate_vnm_instance(spec: InstanceSpec) -> VnmInstance:
    """Plant a utility index on the 1/1024 grid in [0, 1].

    Every atom's row is redrawn until it has two distinct values, so the
    induced oracle is nowhere degenerate.  Grid utilities and 1/64-grid
    lottery masses keep every nonzero expected-utility difference at least
    2**-16, far above the 2**-30 calibration resolution.
    """
    if spec.lottery_outcomes < 2:
        raise ConfigurationError("a planted index needs at least two outcomes")
    rng = SplitMix64(spec.seed)
    algebra = EventAlgebra(atom_labels(spec.atoms))
    outcomes = tuple(f"o{k + 1}" for k in range(spec.lottery_outcomes))
    rows = []
    for _ in range(spec.atoms):
        while True:
            row = tuple(
                Fraction(rng.below(PLANTED_DENOMINATOR + 1), PLANTED_DENOMINATOR)
                for _ in outcomes
            )
            if len(set(row)) >= 2:
                break
        rows.append(row)
    return VnmInstance(UtilityIndex(algebra, outcomes, tuple(rows)), spec)


def random_lottery(
    rng: SplitMix64,
    algebra: EventAlgebra,
    outcomes: Sequence[str],
    denominator: int = LOTTERY_DENOMINATOR,
) -> ConditionalLottery:
    """A lottery with per-atom masses on the 1/denominator grid."""
    outs = tuple(outcomes)
    pmf = []
    for _ in range(algebra.size):
        cuts = sorted(rng.below(denominator + 1) for _ in range(len(outs) - 1))
        bounds = [0, *cuts, denominator]
        pmf.append(
            tuple(
                Fraction(bounds[k + 1] - bounds[k], denominator)
                for k in range(len(outs))
            )
        )
    return ConditionalLottery(algebra, outs, tuple(pmf))


def planted_mixture_triple(
    rng: SplitMix64, instance: VnmInstance
) -> tuple[ConditionalLottery, ConditionalLottery, ConditionalLottery, ConditionalRational]:
    """Draw x strictly above z everywhere and plant y = mix(alpha, x, z).

    The planted alpha sits on the 1/1024 grid, so a 30-step bisection
    recovers it exactly; alpha may hit 0 or 1 at some atoms, exercising
    the endpoint short-circuits of the calibration.
    """
    oracle = instance.oracle()
    algebra = instance.algebra
    while True:
        x = random_lottery(rng, algebra, instance.outcomes)
        z = random_lottery(rng, algebra, instance.outcomes)
        told = oracle.compare(x, z)
        if told.strict_first.is_omega:
            break
        if told.strict_second.is_omega:
            x, z = z, x
            break
    alpha = ConditionalRational(
        algebra,
        tuple(
            Fraction(rng.below(PLANTED_DENOMINATOR + 1), PLANTED_DENOMINATOR)
            for _ in range(algebra.size)
        ),
    )
    return x, mix(alpha, x, z), z, alpha


# ---------------------------------------------------------------------------
# interval-set instances
# ---------------------------------------------------------------------------


def generate_interval_instance(spec: InstanceSpec) -> ConditionalIntervalSet:
    """Disjoint components per atom on the quarter-integer grid.

    Component counts are drawn from spec.values_per_atom.  Zero-width
    draws become degenerate points; positive gaps keep the raw lists
    canonical, and random end flags exercise every gap shape.
    """
    rng = SplitMix64(spec.seed)
    algebra = EventAlgebra(atom_labels(spec.atoms))
    lo, hi = spec.values_per_atom
    per_atom = []
    for _ in range(spec.atoms):
        comps = []
        cursor = Fraction(rng.below(17), 4)
        for _ in range(rng.randint(lo, hi)):
            width = Fraction(rng.below(9), 4)
            if width == 0:
                comps.append(RationalInterval.point(cursor))
            else:
                comps.append(
                    RationalInterval(
                        cursor,
                        cursor + width,
                        rng.bernoulli(Fraction(1, 2)),
                        rng.bernoulli(Fraction(1, 2)),
                    )
                )
            cursor += width + Fraction(rng.below(8) + 1, 4)
        per_atom.append(tuple(comps))
    return ConditionalIntervalSet(algebra, tuple(per_atom))


def random_chain(
    rng: SplitMix64, algebra: EventAlgebra, length: int
) -> tuple[ConditionalRational, ...]:
    """A family of conditional rationals, pairwise distinct at every atom."""
    per_atom = []
    for _ in range(algebra.size):
        while True:
            row = tuple(Fraction(rng.below(4001), 100) for _ in range(length))
            if len(set(row)) == length:
                break
        per_atom.append(row)
    return tuple(
        ConditionalRational(
            algebra, tuple(per_atom[i][k] for i in range(algebra.size))
        )
        for k in range(length)
    )
