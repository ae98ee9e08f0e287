"""Seeded random generators for models, gambles and small chains."""

from __future__ import annotations

import itertools

import numpy as np

from credalmc import (
    BeliefFunction,
    Contamination,
    Event,
    Gamble,
    ImpreciseMarkovChain,
    Linear,
    MassFunction,
    ProbInterval,
    StateSpace,
    UpperTransitionOperator,
    Vacuous,
    VertexSet,
    count_assignments,
)

FAMILIES = ("linear", "vacuous", "vertices", "contamination", "belief", "interval")


def random_mass(rng: np.random.Generator, space: StateSpace) -> MassFunction:
    return MassFunction(space, rng.dirichlet(np.ones(len(space))))


def random_gamble(rng: np.random.Generator, space: StateSpace) -> Gamble:
    return Gamble(space, rng.uniform(-1.0, 1.0, size=len(space)))


def random_prob_interval(rng: np.random.Generator, space: StateSpace) -> ProbInterval:
    n = len(space)
    m = rng.dirichlet(np.ones(n))
    delta = rng.uniform(0.0, 0.3, size=n)
    lo = np.clip(m - delta, 0.0, 1.0)
    up = np.clip(m + delta, 0.0, 1.0)
    # One reachability-repair pass (standard interval tightening); the
    # result still contains m, so the set stays nonempty.
    lo2 = np.maximum(lo, 1.0 - (up.sum() - up))
    up2 = np.minimum(up, 1.0 - (lo.sum() - lo))
    return ProbInterval(space, lo2, up2)


def random_belief(rng: np.random.Generator, space: StateSpace) -> BeliefFunction:
    labels = list(space.labels)
    subsets = [
        s
        for r in range(1, len(labels) + 1)
        for s in itertools.combinations(labels, r)
    ]
    k = int(rng.integers(1, min(3, len(subsets)) + 1))
    picks = rng.choice(len(subsets), size=k, replace=False)
    masses = rng.dirichlet(np.ones(k))
    focal = [
        (Event(space, subsets[int(i)]), float(w)) for i, w in zip(picks, masses)
    ]
    return BeliefFunction(space, focal)


def random_model(rng: np.random.Generator, space: StateSpace, family: str):
    if family == "linear":
        return Linear(random_mass(rng, space))
    if family == "vacuous":
        return Vacuous(space)
    if family == "vertices":
        k = int(rng.integers(1, 4))
        return VertexSet(space, [random_mass(rng, space) for _ in range(k)])
    if family == "contamination":
        return Contamination(random_mass(rng, space), float(rng.uniform(0.05, 0.95)))
    if family == "belief":
        return random_belief(rng, space)
    if family == "interval":
        return random_prob_interval(rng, space)
    raise ValueError(family)


def random_any_model(rng: np.random.Generator, space: StateSpace):
    return random_model(rng, space, str(rng.choice(FAMILIES)))


def random_small_chain(
    rng: np.random.Generator,
    max_states: int = 3,
    max_horizon: int = 3,
    max_vertices: int = 3,
    max_assignments: int = 1200,
) -> ImpreciseMarkovChain:
    """A random chain small enough for the tree oracle.

    Mixes all model families; rejects draws whose models exceed the
    vertex cap or whose tree enumeration exceeds the assignment cap.
    """
    for _ in range(200):
        n_states = int(rng.integers(2, max_states + 1))
        space = StateSpace(["a", "b", "c", "d"][:n_states])
        horizon = int(rng.integers(2, max_horizon + 1))

        def draw():
            for _ in range(30):
                m = random_any_model(rng, space)
                if len(m.vertices()) <= max_vertices:
                    return m
            return Linear(random_mass(rng, space))

        initial = draw()
        op = UpperTransitionOperator(space, [draw() for _ in range(n_states)])
        chain = ImpreciseMarkovChain(initial, op, horizon)
        try:
            if count_assignments(chain, horizon) <= max_assignments:
                return chain
        except Exception:
            continue
    raise RuntimeError("could not draw a small chain within the caps")
