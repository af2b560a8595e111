"""Conditional preference orders over finite event algebras.

Events are bitmask subsets of a finite atom list; conditional objects
(elements, subsets, rationals, lotteries) carry one value per atom of
their living event.  On top of them: per-atom total preorders with
event-valued comparison, exact Debreu- and Rader-style utility tables,
gap analysis and repair for conditional interval sets, and affine utility
extraction from lottery-preference oracles — plus a seeded generator,
property suites with shrinking witnesses, and a JSON/CLI surface.
"""

from .condcore import (
    ConditionalElement,
    ConditionalNatural,
    ConditionalRational,
    ConditionalSubset,
    LocalityReport,
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
from .errors import (
    CondprefError,
    ConfigurationError,
    DegenerateInstanceError,
    DomainError,
    OrderingError,
    PreconditionError,
    StructuralError,
)
from .events import (
    Atom,
    Coarsening,
    Event,
    EventAlgebra,
    is_partition,
    largest_event,
)
from .gaps import (
    ConditionalIntervalSet,
    GapRecord,
    MidpointEmbedding,
    PiecewiseMap,
    RationalInterval,
    canonicalize,
    find_gaps,
    gap_normalize,
    interval_set_of_points,
    midpoint_embedding,
    usc_upgrade,
)
from .generator import (
    InstanceSpec,
    PreferenceInstance,
    SplitMix64,
    VnmInstance,
    generate_interval_instance,
    generate_preference_instance,
    generate_vnm_instance,
    planted_mixture_triple,
    random_chain,
    random_lottery,
    walk_museum_instance,
)
from .preference import (
    AxiomReport,
    AxiomViolation,
    ConditionalPreference,
    RelationGraph,
    TriPartition,
    holds,
    induced_graph,
    strictly_preferred_set,
    tri_partition,
    upper_contour,
    verify_axioms,
)
from .representation import (
    FiniteCondTopology,
    RepresentationReport,
    UtilityTable,
    WeightScheme,
    contour_sets,
    debreu_utility,
    is_order_dense,
    order_dense_subset,
    rader_utility,
    verify_representation,
)
from .suites import SUITE_NAMES, SuiteFailure, SuiteReport, run_suite
from .vnm import (
    AffineFit,
    ArchimedeanReport,
    ConditionalLottery,
    ExpectedUtilityOracle,
    IndependenceReport,
    UtilityIndex,
    affine_equivalence,
    affine_utility,
    calibrate_alpha,
    check_archimedean,
    check_independence,
    expected_utility,
    mix,
    outcome_values,
    utility_index,
    validation_mismatches,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "AffineFit",
    "ArchimedeanReport",
    "AxiomReport",
    "AxiomViolation",
    "Coarsening",
    "ConditionalElement",
    "ConditionalIntervalSet",
    "ConditionalLottery",
    "ConditionalNatural",
    "ConditionalPreference",
    "ConditionalRational",
    "ConditionalSubset",
    "CondprefError",
    "ConfigurationError",
    "DegenerateInstanceError",
    "DomainError",
    "Event",
    "EventAlgebra",
    "ExpectedUtilityOracle",
    "FiniteCondTopology",
    "GapRecord",
    "IndependenceReport",
    "InstanceSpec",
    "LocalityReport",
    "MidpointEmbedding",
    "OrderingError",
    "PiecewiseMap",
    "PreconditionError",
    "PreferenceInstance",
    "RationalInterval",
    "RelationGraph",
    "RepresentationReport",
    "SplitMix64",
    "StructuralError",
    "SUITE_NAMES",
    "SuiteFailure",
    "SuiteReport",
    "TriPartition",
    "UtilityIndex",
    "UtilityTable",
    "VnmInstance",
    "WeightScheme",
    "affine_equivalence",
    "affine_utility",
    "calibrate_alpha",
    "canonicalize",
    "check_archimedean",
    "check_independence",
    "check_locality",
    "concatenate",
    "cond_complement",
    "cond_intersection",
    "cond_union",
    "contour_sets",
    "debreu_utility",
    "entropic_certainty_equivalent",
    "expected_utility",
    "find_gaps",
    "gap_normalize",
    "generate_interval_instance",
    "generate_preference_instance",
    "generate_vnm_instance",
    "holds",
    "induced_graph",
    "interval_set_of_points",
    "is_order_dense",
    "is_partition",
    "largest_event",
    "midpoint_embedding",
    "mix",
    "order_dense_subset",
    "outcome_values",
    "planted_mixture_triple",
    "q_abs",
    "q_add",
    "q_leq",
    "q_mul",
    "rader_utility",
    "random_chain",
    "random_lottery",
    "run_suite",
    "seq_index",
    "strictly_preferred_set",
    "tri_partition",
    "upper_contour",
    "usc_upgrade",
    "utility_index",
    "validation_mismatches",
    "verify_axioms",
    "verify_representation",
    "walk_museum_instance",
]
