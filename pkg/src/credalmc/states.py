"""Finite state spaces, gambles, mass functions and precise expectation.

Everything in this module is immutable after construction; arrays are
frozen so values can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

#: Tolerance on nonnegativity and normalization of mass functions.
#: Inputs within this tolerance are renormalized exactly once at
#: construction; anything further off is rejected.
MASS_TOL = 1e-9


class DimensionMismatch(ValueError):
    """Operands are defined on different state spaces."""


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class StateSpace:
    """An ordered finite set of distinct state labels.

    The ordering is fixed at construction and shared by every gamble and
    mass function over this space; all arrays are positional.
    """

    labels: tuple[str, ...]

    def __init__(self, labels: Iterable[str]):
        labels = tuple(labels)
        if len(labels) == 0:
            raise ValueError("state space must contain at least one state")
        if len(set(labels)) != len(labels):
            raise ValueError("state labels must be unique")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown state {label!r}") from None

    def indicator(self, members: Iterable[str]) -> "Gamble":
        """The 0/1 gamble of the event given by `members`."""
        return Event(self, frozenset(members)).indicator()

    def constant(self, value: float) -> "Gamble":
        return Gamble(self, np.full(len(self), float(value)))


def _check_space(a, b) -> None:
    if a.space != b.space:
        raise DimensionMismatch(
            f"state spaces differ: {a.space.labels} vs {b.space.labels}"
        )


@dataclass(frozen=True)
class Gamble:
    """A real-valued map on the state space, stored positionally."""

    space: StateSpace
    values: np.ndarray

    def __init__(self, space: StateSpace, values):
        values = _freeze(values)
        if values.shape != (len(space),):
            raise DimensionMismatch(
                f"gamble needs {len(space)} values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("gamble values must be finite")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "values", values)

    def at(self, label: str) -> float:
        return float(self.values[self.space.index(label)])

    def __add__(self, other: "Gamble") -> "Gamble":
        _check_space(self, other)
        return Gamble(self.space, self.values + other.values)

    def __sub__(self, other: "Gamble") -> "Gamble":
        _check_space(self, other)
        return Gamble(self.space, self.values - other.values)

    def __neg__(self) -> "Gamble":
        return Gamble(self.space, -self.values)

    def __mul__(self, scalar: float) -> "Gamble":
        return Gamble(self.space, self.values * float(scalar))

    __rmul__ = __mul__

    def max(self) -> float:
        return float(self.values.max())

    def min(self) -> float:
        return float(self.values.min())

    def pointwise_max(self, other: "Gamble") -> "Gamble":
        _check_space(self, other)
        return Gamble(self.space, np.maximum(self.values, other.values))

    def pointwise_min(self, other: "Gamble") -> "Gamble":
        _check_space(self, other)
        return Gamble(self.space, np.minimum(self.values, other.values))

    def sup_dist(self, other: "Gamble") -> float:
        """Supremum-norm distance to another gamble on the same space."""
        _check_space(self, other)
        return float(np.abs(self.values - other.values).max())

    def sup_norm(self) -> float:
        return float(np.abs(self.values).max())


@dataclass(frozen=True)
class Event:
    """A subset of the state space."""

    space: StateSpace
    members: frozenset[str]

    def __init__(self, space: StateSpace, members: Iterable[str]):
        members = frozenset(members)
        unknown = members - set(space.labels)
        if unknown:
            raise KeyError(f"unknown states in event: {sorted(unknown)}")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "members", members)

    def indicator(self) -> Gamble:
        vals = np.array(
            [1.0 if x in self.members else 0.0 for x in self.space.labels]
        )
        return Gamble(self.space, vals)

    def complement(self) -> "Event":
        return Event(self.space, set(self.space.labels) - self.members)

    def mask(self) -> np.ndarray:
        return np.array([x in self.members for x in self.space.labels])


@dataclass(frozen=True)
class MassFunction:
    """A probability mass function on the state space.

    Weights must be nonnegative and sum to one within MASS_TOL; they are
    clipped and renormalized exactly once here.
    """

    space: StateSpace
    weights: np.ndarray

    def __init__(self, space: StateSpace, weights):
        weights = np.array(weights, dtype=float)
        if weights.shape != (len(space),):
            raise DimensionMismatch(
                f"mass function needs {len(space)} weights, got {weights.shape}"
            )
        if np.any(weights < -MASS_TOL) or np.any(weights > 1 + MASS_TOL):
            raise ValueError(f"weights outside [0, 1]: {weights}")
        total = weights.sum()
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"weights sum to {total}, not 1")
        weights = np.clip(weights, 0.0, None) / np.clip(weights, 0.0, None).sum()
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "weights", _freeze(weights))

    @classmethod
    def degenerate(cls, space: StateSpace, label: str) -> "MassFunction":
        w = np.zeros(len(space))
        w[space.index(label)] = 1.0
        return cls(space, w)

    @classmethod
    def uniform(cls, space: StateSpace) -> "MassFunction":
        return cls(space, np.full(len(space), 1.0 / len(space)))

    def at(self, label: str) -> float:
        return float(self.weights[self.space.index(label)])


def expectation(m: MassFunction, h: Gamble) -> float:
    """Linear expectation of the gamble h under the mass function m."""
    _check_space(m, h)
    return float(np.dot(m.weights, h.values))
