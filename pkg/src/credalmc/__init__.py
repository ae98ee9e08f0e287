"""Tight lower/upper expectation bounds for imprecise Markov chains."""

from .states import (
    DimensionMismatch,
    Event,
    Gamble,
    MassFunction,
    StateSpace,
    expectation,
)
from .credal import (
    BeliefFunction,
    Capacity,
    Contamination,
    CredalModel,
    CredalValidationError,
    Linear,
    ProbInterval,
    Vacuous,
    VertexSet,
    choquet,
    validate,
)
from .transition import UpperTransitionOperator
from .chain import ImpreciseMarkovChain, PathGamble
from .limits import (
    ConvergenceError,
    CycleReport,
    LimitReport,
    NotRegularError,
    contamination_evolve,
    contamination_limit,
    detect_cycle,
    invariant_singleton_bounds,
    limit_upper,
    precise_stationary,
)
from .oracle import (
    SizeGuardError,
    TreeAssignment,
    count_assignments,
    envelope,
    envelope_given,
    envelope_many,
    path_mass_envelope,
    path_probabilities,
    tree_expectation,
)

__version__ = "0.1.0"

__all__ = [
    "BeliefFunction",
    "Capacity",
    "Contamination",
    "ConvergenceError",
    "CredalModel",
    "CredalValidationError",
    "CycleReport",
    "DimensionMismatch",
    "Event",
    "Gamble",
    "ImpreciseMarkovChain",
    "LimitReport",
    "Linear",
    "MassFunction",
    "NotRegularError",
    "PathGamble",
    "ProbInterval",
    "SizeGuardError",
    "StateSpace",
    "TreeAssignment",
    "UpperTransitionOperator",
    "Vacuous",
    "VertexSet",
    "choquet",
    "contamination_evolve",
    "contamination_limit",
    "count_assignments",
    "detect_cycle",
    "envelope",
    "envelope_given",
    "envelope_many",
    "expectation",
    "path_mass_envelope",
    "path_probabilities",
    "invariant_singleton_bounds",
    "limit_upper",
    "precise_stationary",
    "tree_expectation",
    "validate",
]
