"""Upper transition operators: one credal model per source state."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .credal import Contamination, CredalModel, Linear, ProbInterval
from .states import DimensionMismatch, Gamble, MassFunction, StateSpace

#: Strict-positivity threshold for the regularity test.  Exact zeros
#: arise structurally (cycles); anything materially positive at desk
#: scale exceeds this by orders of magnitude.
REGULARITY_EPS = 1e-12


@dataclass(frozen=True)
class UpperTransitionOperator:
    """The map h -> (x -> upper expectation of h under the row model at x)."""

    space: StateSpace
    rows: tuple[CredalModel, ...]

    def __init__(self, space: StateSpace, rows: Sequence[CredalModel]):
        rows = tuple(rows)
        if len(rows) != len(space):
            raise DimensionMismatch(
                f"need one row model per state: {len(rows)} != {len(space)}"
            )
        for r in rows:
            if r.space != space:
                raise DimensionMismatch("row model on a different state space")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_matrix(cls, space: StateSpace, matrix) -> "UpperTransitionOperator":
        """Precise operator from a row-stochastic matrix."""
        matrix = np.asarray(matrix, dtype=float)
        return cls(
            space, [Linear(MassFunction(space, row)) for row in matrix]
        )

    @classmethod
    def contamination_of(
        cls, space: StateSpace, matrix, epsilon: float
    ) -> "UpperTransitionOperator":
        """Epsilon-contamination of each row of a precise matrix."""
        matrix = np.asarray(matrix, dtype=float)
        return cls(
            space,
            [Contamination(MassFunction(space, row), epsilon) for row in matrix],
        )

    @classmethod
    def from_interval_matrices(
        cls, space: StateSpace, lower, upper
    ) -> "UpperTransitionOperator":
        """Probability-interval rows from lower/upper Markov matrices."""
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        return cls(
            space, [ProbInterval(space, lo, up) for lo, up in zip(lower, upper)]
        )

    def is_precise(self) -> bool:
        return all(isinstance(r, Linear) for r in self.rows)

    def apply(self, h: Gamble) -> Gamble:
        if h.space != self.space:
            raise DimensionMismatch("gamble on a different state space")
        return Gamble(self.space, [row.upper(h) for row in self.rows])

    def apply_lower(self, h: Gamble) -> Gamble:
        if h.space != self.space:
            raise DimensionMismatch("gamble on a different state space")
        return Gamble(self.space, [row.lower(h) for row in self.rows])

    def power(self, h: Gamble, n: int) -> Gamble:
        """n-fold application of `apply`; n = 0 is the identity."""
        if n < 0:
            raise ValueError("power requires n >= 0")
        for _ in range(n):
            h = self.apply(h)
        return h

    def default_n_max(self) -> int:
        # Wielandt bound for precise primitive matrices; the imprecise
        # case has no published bound, so is_regular treats exhaustion of
        # n_max as inconclusive.
        return (len(self.space) - 1) ** 2 + 1

    def is_regular(self, n_max: int | None = None) -> int | None:
        """Smallest n <= n_max with min over x of T^n I_{y}(x) > 0 for all y.

        Returns that n, or None if no such n <= n_max was found.  None is
        a bounded-search verdict, not a proof of non-regularity.
        """
        if n_max is None:
            n_max = self.default_n_max()
        if n_max < 1:
            raise ValueError("n_max must be >= 1")
        iterates = [self.space.indicator([y]) for y in self.space]
        for n in range(1, n_max + 1):
            iterates = [self.apply(g) for g in iterates]
            if all(g.min() > REGULARITY_EPS for g in iterates):
                return n
        return None
