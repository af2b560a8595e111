"""Conditional lotteries and affine utility extraction.

Lotteries over a shared finite outcome list carry one probability mass
function per atom, so mixing is atom-wise and conditioning a lottery is
just reading its masses on a smaller event.  A preference oracle is
anything with a compare(mu, nu) method returning a TriPartition; the
expected-utility oracle over a planted index is the reference
implementation.

calibrate_alpha finds, per atom, the supremum of the mixture weights beta
for which y stays weakly preferred to the beta-mix of x and z.  It runs
one conditional bisection: every step asks the oracle a single question
whose answer is an event, and the atoms move their brackets
independently.  Atoms where y ties x answer exactly 1 and atoms where y
ties z answer exactly 0; everywhere else the returned dyadic sits within
2**-bits below the supremum.

utility_index runs a round-robin tournament over the point masses to find
per-atom best and worst outcomes, then calibrates every outcome against
those anchors.  affine_equivalence fits one positive affine map per atom
between two utility assignments and verifies it on the remaining probes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .condcore import ConditionalRational
from .errors import (
    ConfigurationError,
    DegenerateInstanceError,
    DomainError,
    PreconditionError,
    StructuralError,
)
from .events import Event, EventAlgebra
from .preference import TriPartition


@dataclass(frozen=True)
class ConditionalLottery:
    """Per-atom probability mass functions over a shared outcome tuple."""

    algebra: EventAlgebra
    outcomes: tuple[str, ...]
    pmf: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if not self.outcomes:
            raise StructuralError("a lottery needs at least one outcome")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise StructuralError("outcome names must be distinct")
        if len(self.pmf) != self.algebra.size:
            raise StructuralError("one pmf per atom is required")
        for i, masses in enumerate(self.pmf):
            if len(masses) != len(self.outcomes):
                raise StructuralError("one mass per outcome is required")
            if any(not isinstance(m, Fraction) or m < 0 for m in masses):
                raise ConfigurationError(
                    f"masses at atom {self.algebra.labels[i]!r} must be nonnegative rationals"
                )
            if sum(masses) != 1:
                raise ConfigurationError(
                    f"masses at atom {self.algebra.labels[i]!r} sum to {sum(masses)}, not 1"
                )

    @classmethod
    def point_mass(
        cls, algebra: EventAlgebra, outcomes: Sequence[str], outcome: str
    ) -> ConditionalLottery:
        return cls.point_masses(algebra, outcomes, [outcome] * algebra.size)

    @classmethod
    def point_masses(
        cls, algebra: EventAlgebra, outcomes: Sequence[str], per_atom: Sequence[str]
    ) -> ConditionalLottery:
        """A lottery that is a point mass at each atom, possibly on different outcomes."""
        if len(per_atom) != algebra.size:
            raise StructuralError("one outcome per atom is required")
        outs = tuple(outcomes)
        pmf = []
        for o in per_atom:
            if o not in outs:
                raise DomainError(f"unknown outcome {o!r}")
            pmf.append(
                tuple(Fraction(1) if c == o else Fraction(0) for c in outs)
            )
        return cls(algebra, outs, tuple(pmf))

    def mass_at(self, atom_index: int, outcome: str) -> Fraction:
        return self.pmf[atom_index][self.outcomes.index(outcome)]


def _as_conditional(algebra: EventAlgebra, alpha) -> ConditionalRational:
    if isinstance(alpha, ConditionalRational):
        if alpha.algebra != algebra:
            raise StructuralError("mixture weight lives on a different algebra")
        return alpha
    return ConditionalRational.constant(algebra, alpha)


def mix(alpha, mu: ConditionalLottery, nu: ConditionalLottery) -> ConditionalLottery:
    """The atom-wise convex combination alpha*mu + (1-alpha)*nu."""
    if mu.algebra != nu.algebra or mu.outcomes != nu.outcomes:
        raise StructuralError("mixed lotteries must share an algebra and outcomes")
    a = _as_conditional(mu.algebra, alpha)
    if any(not 0 <= v <= 1 for v in a.values):
        raise DomainError(f"mixture weight outside [0, 1]: {a!r}")
    pmf = tuple(
        tuple(
            a.values[i] * m + (1 - a.values[i]) * n
            for m, n in zip(mu.pmf[i], nu.pmf[i])
        )
        for i in range(mu.algebra.size)
    )
    return ConditionalLottery(mu.algebra, mu.outcomes, pmf)


@dataclass(frozen=True)
class UtilityIndex:
    """Per-atom utility values for every outcome."""

    algebra: EventAlgebra
    outcomes: tuple[str, ...]
    u: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if len(self.u) != self.algebra.size:
            raise StructuralError("one utility row per atom is required")
        if any(len(row) != len(self.outcomes) for row in self.u):
            raise StructuralError("one utility per outcome is required")

    def value(self, atom_index: int, outcome: str) -> Fraction:
        return self.u[atom_index][self.outcomes.index(outcome)]


def outcome_values(index: UtilityIndex) -> list[ConditionalRational]:
    """The index split into one conditional rational per outcome."""
    return [
        ConditionalRational(
            index.algebra,
            tuple(index.u[i][k] for i in range(index.algebra.size)),
        )
        for k in range(len(index.outcomes))
    ]


def expected_utility(index: UtilityIndex, mu: ConditionalLottery) -> ConditionalRational:
    """Atom-wise exact expectation of the index under the lottery."""
    if index.algebra != mu.algebra or index.outcomes != mu.outcomes:
        raise StructuralError("index and lottery must share an algebra and outcomes")
    return ConditionalRational(
        mu.algebra,
        tuple(
            sum((q * m for q, m in zip(index.u[i], mu.pmf[i])), Fraction(0))
            for i in range(mu.algebra.size)
        ),
    )


class ExpectedUtilityOracle:
    """The preference an index induces: compare lotteries by expected utility."""

    def __init__(self, index: UtilityIndex):
        self.index = index
        self.algebra = index.algebra
        self.outcomes = index.outcomes

    def compare(self, mu: ConditionalLottery, nu: ConditionalLottery) -> TriPartition:
        a = expected_utility(self.index, mu)
        b = expected_utility(self.index, nu)
        eq = a.eq_event(b)
        return TriPartition(
            equiv=eq,
            strict_first=b.lt_event(a),
            strict_second=a.lt_event(b),
        )


def weak_event(oracle, mu: ConditionalLottery, nu: ConditionalLottery) -> Event:
    """The event on which the oracle weakly prefers mu to nu."""
    t = oracle.compare(mu, nu)
    return t.equiv | t.strict_first


def calibrate_alpha(
    oracle,
    x: ConditionalLottery,
    y: ConditionalLottery,
    z: ConditionalLottery,
    bits: int = 30,
) -> ConditionalRational:
    """Per-atom supremum of {beta: y weakly preferred to beta*x + (1-beta)*z}.

    Requires x weakly above y weakly above z everywhere and x strictly
    above z everywhere.  Atoms where y ties x return exactly 1 and atoms
    where y ties z return exactly 0; the bisected remainder returns the
    lower bracket after the requested number of steps, a dyadic within
    2**-bits of the supremum and never above it.
    """
    if bits < 1:
        raise ConfigurationError("bits must be at least 1")
    algebra = x.algebra
    cmp_xz = oracle.compare(x, z)
    if not cmp_xz.strict_first.is_omega:
        raise PreconditionError(
            f"x must beat z strictly everywhere; fails on {(~cmp_xz.strict_first).labels()}"
        )
    cmp_xy = oracle.compare(x, y)
    if not (cmp_xy.equiv | cmp_xy.strict_first).is_omega:
        raise PreconditionError(
            f"x must be weakly above y; fails on {cmp_xy.strict_second.labels()}"
        )
    cmp_yz = oracle.compare(y, z)
    if not (cmp_yz.equiv | cmp_yz.strict_first).is_omega:
        raise PreconditionError(
            f"y must be weakly above z; fails on {cmp_yz.strict_second.labels()}"
        )
    one_on = cmp_xy.equiv
    zero_on = cmp_yz.equiv
    # y ~ x and y ~ z at one atom would force x ~ z there, against x > z.
    assert (one_on & zero_on).is_empty
    lo = [Fraction(0)] * algebra.size
    hi = [Fraction(1)] * algebra.size
    active = ~(one_on | zero_on)
    for _ in range(bits):
        probe = ConditionalRational(
            algebra,
            tuple(
                Fraction(1)
                if i in one_on
                else Fraction(0)
                if i in zero_on
                else (lo[i] + hi[i]) / 2
                for i in range(algebra.size)
            ),
        )
        keeps = weak_event(oracle, y, mix(probe, x, z))
        for i in active:
            if i in keeps:
                lo[i] = probe.values[i]
            else:
                hi[i] = probe.values[i]
    return ConditionalRational(
        algebra,
        tuple(
            Fraction(1) if i in one_on else Fraction(0) if i in zero_on else lo[i]
            for i in range(algebra.size)
        ),
    )


# ---------------------------------------------------------------------------
# axiom checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndependenceViolation:
    sample_index: int
    lost_on: Event


@dataclass(frozen=True)
class IndependenceReport:
    samples_checked: int
    vacuous: int
    violations: tuple[IndependenceViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_independence(oracle, samples: Sequence[tuple]) -> IndependenceReport:
    """Test that strict preference survives mixing with a common third lottery.

    Each sample is (x, y, z, alpha) with alpha in (0, 1].  Wherever x
    beats y strictly, the alpha-mixes with z must keep that strict
    preference; atoms that lose it are reported.  Samples where x nowhere
    beats y are counted as vacuous.
    """
    violations = []
    vacuous = 0
    for k, (x, y, z, alpha) in enumerate(samples):
        a = _as_conditional(x.algebra, alpha)
        if any(not 0 < v <= 1 for v in a.values):
            raise DomainError(f"sample {k}: alpha must lie in (0, 1]")
        before = oracle.compare(x, y).strict_first
        if before.is_empty:
            vacuous += 1
            continue
        after = oracle.compare(mix(a, x, z), mix(a, y, z)).strict_first
        lost = before - after
        if lost:
            violations.append(IndependenceViolation(k, lost))
    return IndependenceReport(len(samples), vacuous, tuple(violations))


@dataclass(frozen=True)
class ArchimedeanWitness:
    sample_index: int
    alpha: Fraction | None
    beta: Fraction | None

    @property
    def found(self) -> bool:
        return self.alpha is not None and self.beta is not None


@dataclass(frozen=True)
class ArchimedeanReport:
    resolution_bits: int
    witnesses: tuple[ArchimedeanWitness, ...]

    @property
    def ok(self) -> bool:
        return all(w.found for w in self.witnesses)


def check_archimedean(
    oracle, samples: Sequence[tuple], bits: int = 30
) -> ArchimedeanReport:
    """Search dyadic mixture weights witnessing the Archimedean axiom.

    Each sample is (x, y, z) with x strictly above y strictly above z
    everywhere (checked).  For alpha the search walks 1 - 2**-k upward
    until the alpha-mix of x and z beats y everywhere, and for beta it
    walks 2**-k downward until y beats the beta-mix everywhere.  A side
    still unresolved at k = bits is reported as a failure at that
    resolution.
    """
    witnesses = []
    for k, (x, y, z) in enumerate(samples):
        if not oracle.compare(x, y).strict_first.is_omega:
            raise PreconditionError(f"sample {k}: x must beat y strictly everywhere")
        if not oracle.compare(y, z).strict_first.is_omega:
            raise PreconditionError(f"sample {k}: y must beat z strictly everywhere")
        alpha = None
        beta = None
        for j in range(1, bits + 1):
            step = Fraction(1, 2**j)
            if alpha is None and oracle.compare(mix(1 - step, x, z), y).strict_first.is_omega:
                alpha = 1 - step
            if beta is None and oracle.compare(y, mix(step, x, z)).strict_first.is_omega:
                beta = step
            if alpha is not None and beta is not None:
                break
        witnesses.append(ArchimedeanWitness(k, alpha, beta))
    return ArchimedeanReport(bits, tuple(witnesses))


# ---------------------------------------------------------------------------
# utility extraction
# ---------------------------------------------------------------------------


def affine_utility(
    oracle,
    best: ConditionalLottery,
    worst: ConditionalLottery,
    probes: Sequence[ConditionalLottery],
    bits: int = 30,
) -> list[ConditionalRational]:
    """Calibrate each probe between the anchors; best maps to 1, worst to 0.

    Requires best strictly above worst everywhere and every probe weakly
    between the anchors everywhere.  Mixing two probes mixes their values
    up to twice the bisection resolution.
    """
    cmp_bw = oracle.compare(best, worst)
    if not cmp_bw.strict_first.is_omega:
        raise PreconditionError(
            f"best must beat worst strictly everywhere; "
            f"fails on {(~cmp_bw.strict_first).labels()}"
        )
    out = []
    for k, probe in enumerate(probes):
        if not weak_event(oracle, best, probe).is_omega:
            raise PreconditionError(f"probe {k} is not weakly below best everywhere")
        if not weak_event(oracle, probe, worst).is_omega:
            raise PreconditionError(f"probe {k} is not weakly above worst everywhere")
        out.append(calibrate_alpha(oracle, best, probe, worst, bits))
    return out


def tournament_anchors(
    oracle, algebra: EventAlgebra, outcomes: Sequence[str]
) -> tuple[ConditionalLottery, ConditionalLottery]:
    """Per-atom best and worst point masses by round-robin comparison."""
    outs = tuple(outcomes)
    deltas = {o: ConditionalLottery.point_mass(algebra, outs, o) for o in outs}
    weak: dict[tuple[str, str], Event] = {}
    for a in outs:
        for b in outs:
            if a != b:
                weak[a, b] = weak_event(oracle, deltas[a], deltas[b])
    best_per_atom = []
    worst_per_atom = []
    for i in range(algebra.size):
        best = next(
            (o for o in outs if all(i in weak[o, other] for other in outs if other != o)),
            None,
        )
        worst = next(
            (o for o in outs if all(i in weak[other, o] for other in outs if other != o)),
            None,
        )
        if best is None or worst is None:
            raise PreconditionError(
                f"oracle is not total over point masses at atom {algebra.labels[i]!r}"
            )
        best_per_atom.append(best)
        worst_per_atom.append(worst)
    best_lottery = ConditionalLottery.point_masses(algebra, outs, best_per_atom)
    worst_lottery = ConditionalLottery.point_masses(algebra, outs, worst_per_atom)
    strict = oracle.compare(best_lottery, worst_lottery).strict_first
    if not strict.is_omega:
        bad = (~strict).labels()
        raise DegenerateInstanceError(
            f"all outcomes are equivalent at atoms {bad}; no anchors exist there"
        )
    return best_lottery, worst_lottery


def utility_index(
    oracle, algebra: EventAlgebra, outcomes: Sequence[str], bits: int = 30
) -> UtilityIndex:
    """Recover a utility index from a preference oracle over lotteries.

    Anchors come from a point-mass tournament; each outcome's utility is
    its calibration between the anchors, so the per-atom best outcome
    gets exactly 1 and the worst exactly 0.
    """
    outs = tuple(outcomes)
    best, worst = tournament_anchors(oracle, algebra, outs)
    deltas = [ConditionalLottery.point_mass(algebra, outs, o) for o in outs]
    values = affine_utility(oracle, best, worst, deltas, bits)
    rows = tuple(
        tuple(values[j].value_at(i) for j in range(len(outs)))
        for i in range(algebra.size)
    )
    return UtilityIndex(algebra, outs, rows)


@dataclass(frozen=True)
class AffineFit:
    ok: bool
    a: ConditionalRational | None
    b: ConditionalRational | None
    worst_deviation: Fraction
    worst_at: tuple[str, int] | None
    reason: str = ""


def affine_equivalence(
    u1: Sequence[ConditionalRational],
    u2: Sequence[ConditionalRational],
    bits: int = 30,
) -> AffineFit:
    """Fit u2 = a*u1 + b per atom with a > 0 and verify on all probes.

    The fit at each atom uses the probe pair with the widest u1 spread;
    with that choice, probe noise of at most 2**-bits inflates the
    residual on any other probe to at most 4 * 2**-bits, which is the
    acceptance tolerance.  All u1 values equal at some atom leaves the
    fit underdetermined and raises instead.
    """
    if len(u1) != len(u2) or len(u1) < 2:
        raise StructuralError("affine fitting needs two aligned probe lists")
    algebra = u1[0].algebra
    tolerance = 4 * Fraction(1, 2**bits)
    slopes = []
    offsets = []
    worst = Fraction(0)
    worst_at = None
    for i in range(algebra.size):
        vals1 = [q.value_at(i) for q in u1]
        vals2 = [q.value_at(i) for q in u2]
        pairs = [(j, k) for j in range(len(vals1)) for k in range(j + 1, len(vals1))]
        j, k = max(pairs, key=lambda p: abs(vals1[p[0]] - vals1[p[1]]))
        span = vals1[j] - vals1[k]
        if span == 0:
            raise DegenerateInstanceError(
                f"all first-map values equal at atom {algebra.labels[i]!r}; "
                "affine fit is underdetermined"
            )
        a = (vals2[j] - vals2[k]) / span
        if a <= 0:
            return AffineFit(
                False, None, None, Fraction(0), None,
                f"fitted slope {a} at atom {algebra.labels[i]!r} is not positive",
            )
        b = vals2[j] - a * vals1[j]
        for t in range(len(vals1)):
            dev = abs(vals2[t] - (a * vals1[t] + b))
            if dev > worst:
                worst = dev
                worst_at = (algebra.labels[i], t)
        slopes.append(a)
        offsets.append(b)
    if worst > tolerance:
        return AffineFit(
            False, None, None, worst, worst_at,
            f"worst deviation {worst} exceeds tolerance {tolerance}",
        )
    return AffineFit(
        True,
        ConditionalRational(algebra, tuple(slopes)),
        ConditionalRational(algebra, tuple(offsets)),
        worst,
        worst_at,
    )


def classify_difference(diff: Fraction, bits: int = 30) -> int:
    """Sign of a recovered expected-utility difference at resolution 2**-bits.

    Calibration noise moves any expected-utility difference by at most
    2 * 2**-bits, so differences inside that band are treated as ties.
    """
    band = 2 * Fraction(1, 2**bits)
    if abs(diff) <= band:
        return 0
    return 1 if diff > 0 else -1


def validation_mismatches(
    oracle,
    index: UtilityIndex,
    pairs: Sequence[tuple[ConditionalLottery, ConditionalLottery]],
    bits: int = 30,
) -> list[tuple[int, str]]:
    """Atoms where the recovered index disagrees with the oracle in sign."""
    mismatches = []
    for k, (mu, nu) in enumerate(pairs):
        told = oracle.compare(mu, nu)
        diff = expected_utility(index, mu) - expected_utility(index, nu)
        for i in range(index.algebra.size):
            sign = classify_difference(diff.value_at(i), bits)
            expected = 0 if i in told.equiv else (1 if i in told.strict_first else -1)
            if sign != expected:
                mismatches.append((k, index.algebra.labels[i]))
    return mismatches
