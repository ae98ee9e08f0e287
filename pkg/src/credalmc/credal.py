"""Credal-set models and their upper/lower expectation functionals.

Five representations of a closed convex set of mass functions are
supported: a singleton (Linear), the full simplex (Vacuous), an explicit
vertex list (VertexSet), an epsilon-contamination of a precise mass
function (Contamination), a belief function given by focal elements
(BeliefFunction), and per-state probability intervals (ProbInterval).

Every model exposes `upper(h)` (the maximum linear expectation over the
set), `lower(h)` (its conjugate) and `vertices()` (a finite spanning set
containing all extreme points).  Validation happens at construction and
is never silently repaired; an inconsistent credal set invalidates every
downstream bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .states import (
    Event,
    Gamble,
    MassFunction,
    StateSpace,
    expectation,
    _check_space,
    _freeze,
)

#: Coordinatewise tolerance used when removing duplicate vertices.
VERTEX_DEDUP_TOL = 1e-12

#: Feasibility slack used in ProbInterval vertex enumeration.
_FEAS_TOL = 1e-9


class CredalValidationError(ValueError):
    """A credal model failed validation; `code` names the failure."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class CredalModel:
    """Base class for the credal-set representations."""

    space: StateSpace

    def upper(self, h: Gamble) -> float:
        raise NotImplementedError

    def lower(self, h: Gamble) -> float:
        """Conjugate lower expectation: lower(h) = -upper(-h)."""
        return -self.upper(-h)

    def vertices(self) -> list[MassFunction]:
        raise NotImplementedError

    def _check(self, h: Gamble) -> None:
        _check_space(self, h)


def _dedup(masses: Sequence[MassFunction]) -> list[MassFunction]:
    out: list[MassFunction] = []
    for m in masses:
        if not any(
            np.abs(m.weights - kept.weights).max() <= VERTEX_DEDUP_TOL
            for kept in out
        ):
            out.append(m)
    return out


@dataclass(frozen=True)
class Linear(CredalModel):
    """The singleton credal set {m}; upper and lower coincide."""

    mass: MassFunction

    @property
    def space(self) -> StateSpace:
        return self.mass.space

    def upper(self, h: Gamble) -> float:
        self._check(h)
        return expectation(self.mass, h)

    def vertices(self) -> list[MassFunction]:
        return [self.mass]


@dataclass(frozen=True)
class Vacuous(CredalModel):
    """The full simplex; upper(h) = max h, lower(h) = min h."""

    space: StateSpace

    def upper(self, h: Gamble) -> float:
        self._check(h)
        return h.max()

    def vertices(self) -> list[MassFunction]:
        return [MassFunction.degenerate(self.space, x) for x in self.space]


@dataclass(frozen=True)
class VertexSet(CredalModel):
    """The convex hull of an explicit, nonempty list of mass functions."""

    space: StateSpace
    points: tuple[MassFunction, ...]

    def __init__(self, space: StateSpace, points: Sequence[MassFunction]):
        points = tuple(points)
        if not points:
            raise CredalValidationError(
                "empty-credal-set", "vertex list must be nonempty"
            )
        for p in points:
            if p.space != space:
                raise CredalValidationError(
                    "space-mismatch", "vertex defined on a different space"
                )
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "points", points)

    def upper(self, h: Gamble) -> float:
        self._check(h)
        return max(expectation(p, h) for p in self.points)

    def vertices(self) -> list[MassFunction]:
        return list(self.points)


@dataclass(frozen=True)
class Contamination(CredalModel):
    """Epsilon-contamination of a precise mass function.

    upper(h) = (1 - eps) * E_base(h) + eps * max h, for eps in (0, 1).
    """

    base: MassFunction
    epsilon: float

    def __init__(self, base: MassFunction, epsilon: float):
        epsilon = float(epsilon)
        if not (0.0 < epsilon < 1.0):
            raise CredalValidationError(
                "epsilon-out-of-range",
                f"contamination epsilon must lie in (0, 1), got {epsilon}",
            )
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "epsilon", epsilon)

    @property
    def space(self) -> StateSpace:
        return self.base.space

    def upper(self, h: Gamble) -> float:
        self._check(h)
        return (1.0 - self.epsilon) * expectation(self.base, h) + self.epsilon * h.max()

    def vertices(self) -> list[MassFunction]:
        out = []
        for x in self.space:
            delta = MassFunction.degenerate(self.space, x)
            out.append(
                MassFunction(
                    self.space,
                    (1.0 - self.epsilon) * self.base.weights
                    + self.epsilon * delta.weights,
                )
            )
        return _dedup(out)


@dataclass(frozen=True)
class BeliefFunction(CredalModel):
    """A convex mixture of vacuous models on focal elements.

    upper(h) = sum_j m(F_j) * max over F_j of h; the masses m(F_j) are
    nonnegative and sum to one, each focal element F_j is nonempty.
    """

    space: StateSpace
    focal: tuple[tuple[Event, float], ...]

    def __init__(self, space: StateSpace, focal: Sequence[tuple[Event, float]]):
        focal = tuple((ev, float(w)) for ev, w in focal)
        if not focal:
            raise CredalValidationError(
                "empty-credal-set", "belief function needs at least one focal element"
            )
        for ev, w in focal:
            if ev.space != space:
                raise CredalValidationError(
                    "space-mismatch", "focal element on a different space"
                )
            if not ev.members:
                raise CredalValidationError(
                    "empty-credal-set", "focal elements must be nonempty"
                )
            if w < -1e-12:
                raise CredalValidationError(
                    "mass-sum-violation", f"negative focal mass {w}"
                )
        total = sum(w for _, w in focal)
        if abs(total - 1.0) > 1e-9:
            raise CredalValidationError(
                "mass-sum-violation", f"focal masses sum to {total}, not 1"
            )
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "focal", focal)

    def upper(self, h: Gamble) -> float:
        self._check(h)
        total = 0.0
        for ev, w in self.focal:
            total += w * max(h.values[self.space.index(x)] for x in ev.members)
        return float(total)

    def vertices(self) -> list[MassFunction]:
        # One selection assigns each focal element's mass wholly to one of
        # its members; selections span the credal set (some may be
        # non-extreme interior points, which is harmless for max/min).
        choices = [sorted(ev.members) for ev, _ in self.focal]
        out = []
        for picks in itertools.product(*choices):
            w = np.zeros(len(self.space))
            for (ev, mass), pick in zip(self.focal, picks):
                w[self.space.index(pick)] += mass
            out.append(MassFunction(self.space, w))
        return _dedup(out)


@dataclass(frozen=True)
class Capacity:
    """A normalized monotone set function on events, for Choquet integration."""

    space: StateSpace
    fn: Callable[[frozenset], float]

    def __call__(self, members) -> float:
        members = frozenset(members)
        if not members:
            return 0.0
        return float(self.fn(members))


@dataclass(frozen=True)
class ProbInterval(CredalModel):
    """A credal set cut from the simplex by per-state mass bounds.

    The event upper probability min{sum of upper over A, 1 - sum of lower
    outside A} is 2-alternating, so upper expectations are computed
    exactly by Choquet integration against it.
    """

    space: StateSpace
    lower_mass: np.ndarray
    upper_mass: np.ndarray

    def __init__(self, space: StateSpace, lower_mass, upper_mass):
        lo = _freeze(lower_mass)
        up = _freeze(upper_mass)
        n = len(space)
        if lo.shape != (n,) or up.shape != (n,):
            raise CredalValidationError(
                "space-mismatch", "bound arrays must have one entry per state"
            )
        if np.any(lo < -1e-12) or np.any(up > 1 + 1e-12) or np.any(lo > up + 1e-12):
            raise CredalValidationError(
                "empty-credal-set",
                "need 0 <= lower <= upper <= 1 for every state",
            )
        if lo.sum() > 1 + 1e-9 or up.sum() < 1 - 1e-9:
            raise CredalValidationError(
                "empty-credal-set",
                f"sum of lower bounds {lo.sum()} and upper bounds {up.sum()} "
                "leave no mass function in the set",
            )
        # Reachability: every bound must be attained by some member.
        for i in range(n):
            others_up = up.sum() - up[i]
            others_lo = lo.sum() - lo[i]
            if lo[i] + others_up < 1 - 1e-9 or up[i] + others_lo > 1 + 1e-9:
                raise CredalValidationError(
                    "non-reachable-bounds",
                    f"bounds for state {space.labels[i]!r} cannot be attained",
                )
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "lower_mass", lo)
        object.__setattr__(self, "upper_mass", up)

    def event_upper(self, members) -> float:
        """Upper probability of an event: min of the two interval cuts."""
        if isinstance(members, Event):
            members = members.members
        mask = np.array([x in members for x in self.space.labels])
        return float(
            min(self.upper_mass[mask].sum(), 1.0 - self.lower_mass[~mask].sum())
        )

    def capacity(self) -> Capacity:
        return Capacity(self.space, self.event_upper)

    def upper(self, h: Gamble) -> float:
        self._check(h)
        return choquet(self.capacity(), h)

    def vertices(self) -> list[MassFunction]:
        # Every vertex of an interval polytope on the simplex has at most
        # one coordinate strictly between its bounds; enumerate bound
        # patterns with one free coordinate forced by normalization.
        n = len(self.space)
        lo, up = self.lower_mass, self.upper_mass
        out = []
        for free in range(n):
            rest = [i for i in range(n) if i != free]
            for pattern in itertools.product((0, 1), repeat=n - 1):
                w = np.empty(n)
                for i, bit in zip(rest, pattern):
                    w[i] = up[i] if bit else lo[i]
                w[free] = 1.0 - w[rest].sum()
                if lo[free] - _FEAS_TOL <= w[free] <= up[free] + _FEAS_TOL:
                    w[free] = min(max(w[free], lo[free]), up[free])
                    out.append(MassFunction(self.space, w))
        return _dedup(out)


def choquet(c: Capacity, h: Gamble) -> float:
    """Choquet integral of a gamble against a capacity.

    Exact finite evaluation over the sorted distinct values of h:
    min h + sum over gaps (a_{i+1} - a_i) * c({z : h(z) >= a_{i+1}}).
    """
    if c.space != h.space:
        raise CredalValidationError("space-mismatch", "capacity/gamble space differ")
    alphas = np.unique(h.values)
    total = float(alphas[0])
    labels = c.space.labels
    for a0, a1 in zip(alphas[:-1], alphas[1:]):
        level = frozenset(
            labels[i] for i in range(len(labels)) if h.values[i] >= a1
        )
        total += float(a1 - a0) * c(level)
    return total


def validate(model: CredalModel) -> None:
    """Re-run the construction-time invariants of a model.

    Models validate at construction, so this only guards values built by
    other means (e.g. unpickling); raises CredalValidationError on failure.
    """
    if isinstance(model, VertexSet):
        VertexSet(model.space, model.points)
    elif isinstance(model, Contamination):
        Contamination(model.base, model.epsilon)
    elif isinstance(model, BeliefFunction):
        BeliefFunction(model.space, model.focal)
    elif isinstance(model, ProbInterval):
        ProbInterval(model.space, model.lower_mass, model.upper_mass)
    elif isinstance(model, (Linear, Vacuous)):
        pass
    else:
        raise CredalValidationError(
            "unknown-model", f"not a credal model: {type(model).__name__}"
        )
