"""Backwards recursion for imprecise Markov chains.

Marginal and conditional queries operate on gambles of size |X| and
never materialize the path space, so their cost is linear in the number
of time steps.  Joint queries over path gambles fold a dense table over
X^N one time axis at a time and are meant for desk-scale horizons.

Time indices are 1-based: X(1) is the initial state and a chain with
horizon N has N - 1 transition steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .credal import CredalModel
from .states import DimensionMismatch, Gamble, StateSpace
from .transition import UpperTransitionOperator


@dataclass(frozen=True)
class PathGamble:
    """A real-valued map on length-N state sequences.

    `values` is a dense array of shape (|X|,) * N indexed positionally.
    If `depends_on` is given, the table must be constant along every time
    axis outside it; this is checked exhaustively at construction.
    """

    space: StateSpace
    horizon: int
    values: np.ndarray
    depends_on: frozenset[int] | None = None

    def __init__(
        self,
        space: StateSpace,
        horizon: int,
        values,
        depends_on: Iterable[int] | None = None,
    ):
        horizon = int(horizon)
        if horizon < 1:
            raise ValueError("horizon must be >= 1")
        values = np.array(values, dtype=float)
        expect = (len(space),) * horizon
        if values.shape != expect:
            raise DimensionMismatch(
                f"path gamble table must have shape {expect}, got {values.shape}"
            )
        values.setflags(write=False)
        if depends_on is not None:
            depends_on = frozenset(int(k) for k in depends_on)
            if not depends_on <= set(range(1, horizon + 1)):
                raise ValueError("depends_on must be a subset of {1, ..., N}")
            for k in range(1, horizon + 1):
                if k not in depends_on and np.ptp(values, axis=k - 1).max() > 0:
                    raise ValueError(
                        f"table varies along time {k} outside depends_on"
                    )
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "horizon", horizon)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "depends_on", depends_on)

    @classmethod
    def from_gamble(cls, h: Gamble, time: int, horizon: int) -> "PathGamble":
        """Lift a gamble on X to a path gamble depending only on `time`."""
        if not 1 <= time <= horizon:
            raise ValueError("time out of range")
        shape = [1] * horizon
        shape[time - 1] = len(h.space)
        table = np.broadcast_to(
            h.values.reshape(shape), (len(h.space),) * horizon
        )
        return cls(h.space, horizon, table, depends_on={time})

    @classmethod
    def path_indicator(
        cls, space: StateSpace, horizon: int, path: Sequence[str]
    ) -> "PathGamble":
        """Indicator of a single length-N path."""
        if len(path) != horizon:
            raise ValueError("path length must equal the horizon")
        table = np.zeros((len(space),) * horizon)
        table[tuple(space.index(x) for x in path)] = 1.0
        return cls(space, horizon, table)

    def __neg__(self) -> "PathGamble":
        return PathGamble(self.space, self.horizon, -self.values, self.depends_on)


@dataclass(frozen=True)
class ImpreciseMarkovChain:
    """Initial credal model plus transition operator(s) and a horizon."""

    space: StateSpace
    initial: CredalModel
    transitions: tuple[UpperTransitionOperator, ...]
    horizon: int
    stationary: bool

    def __init__(
        self,
        initial: CredalModel,
        transitions,
        horizon: int,
    ):
        horizon = int(horizon)
        if horizon < 1:
            raise ValueError("horizon must be >= 1")
        space = initial.space
        if isinstance(transitions, UpperTransitionOperator):
            stationary = True
            ops = (transitions,)
        else:
            stationary = False
            ops = tuple(transitions)
            if len(ops) != horizon - 1:
                raise ValueError(
                    f"per-step chain needs {horizon - 1} operators, got {len(ops)}"
                )
        for op in ops:
            if op.space != space:
                raise DimensionMismatch("operator on a different state space")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "transitions", ops)
        object.__setattr__(self, "horizon", horizon)
        object.__setattr__(self, "stationary", stationary)

    def operator_at(self, k: int) -> UpperTransitionOperator:
        """The operator governing the step from time k to k + 1."""
        if not 1 <= k <= self.horizon - 1:
            raise ValueError(f"step index {k} out of range")
        return self.transitions[0] if self.stationary else self.transitions[k - 1]

    # ------------------------------------------------------------------
    # Marginal and conditional queries (gamble-sized, linear in n).

    def marginal_upper(self, n: int, h: Gamble) -> float:
        """Upper expectation of h(X(n)): fold h back to time 1, then close
        with the initial model."""
        if not 1 <= n <= self.horizon:
            raise ValueError(f"time {n} out of range [1, {self.horizon}]")
        for k in range(n - 1, 0, -1):
            h = self.operator_at(k).apply(h)
        return self.initial.upper(h)

    def marginal_lower(self, n: int, h: Gamble) -> float:
        return -self.marginal_upper(n, -h)

    def conditional_upper(self, ell: int, x_ell: str, n: int, h: Gamble) -> float:
        """Upper expectation of h(X(n)) given X(ell) = x_ell, ell < n."""
        if not 1 <= ell < n <= self.horizon:
            raise ValueError(f"need 1 <= {ell} < {n} <= {self.horizon}")
        for k in range(n - 1, ell - 1, -1):
            h = self.operator_at(k).apply(h)
        return h.at(x_ell)

    def conditional_lower(self, ell: int, x_ell: str, n: int, h: Gamble) -> float:
        return -self.conditional_upper(ell, x_ell, n, -h)

    # ------------------------------------------------------------------
    # Joint queries over path gambles.

    def _fold(self, f: PathGamble, down_to: int) -> np.ndarray:
        """Fold the table over X^N down to a table over X^down_to.

        One backward step conditions only on the last coordinate: the
        slice of the table at each history is a gamble in the final time
        axis, evaluated under the row model of the history's last state.
        """
        if f.horizon != self.horizon:
            raise DimensionMismatch(
                f"path gamble horizon {f.horizon} != chain horizon {self.horizon}"
            )
        s = len(self.space)
        table = f.values
        for k in range(self.horizon - 1, down_to - 1, -1):
            op = self.operator_at(k)
            new = np.empty((s,) * k)
            for idx in np.ndindex(*(s,) * k):
                row = op.rows[idx[-1]]
                new[idx] = row.upper(Gamble(self.space, table[idx]))
            table = new
        return table

    def joint_upper(self, f: PathGamble) -> float:
        """Upper expectation of a path gamble over all compatible trees."""
        table = self._fold(f, down_to=1)
        return self.initial.upper(Gamble(self.space, table))

    def joint_lower(self, f: PathGamble) -> float:
        return -self.joint_upper(-f)

    def joint_upper_given(self, prefix: Sequence[str], f: PathGamble) -> float:
        """Upper expectation of f conditional on the history X(1:n) = prefix."""
        n = len(prefix)
        if not 1 <= n <= self.horizon:
            raise ValueError("prefix length out of range")
        idx = tuple(self.space.index(x) for x in prefix)
        if n == self.horizon:
            return float(f.values[idx])
        table = self._fold(f, down_to=n)
        return float(table[idx])

    def joint_lower_given(self, prefix: Sequence[str], f: PathGamble) -> float:
        return -self.joint_upper_given(prefix, -f)

    def markov_invariance_gap(self, n: int, f: PathGamble) -> float:
        """Largest history dependence of the conditional upper expectation.

        For an {n, ..., N}-measurable f the value given (history, x_n)
        must not depend on the history; returns the max over x_n of the
        spread across all histories (0.0 when n == 1).
        """
        if f.depends_on is None or not f.depends_on <= set(
            range(n, self.horizon + 1)
        ):
            raise ValueError(
                "path gamble must declare depends_on within {n, ..., N}"
            )
        if n == 1:
            return 0.0
        labels = self.space.labels
        gap = 0.0
        for x_n in labels:
            values = []
            for hist_idx in np.ndindex(*(len(labels),) * (n - 1)):
                hist = tuple(labels[i] for i in hist_idx)
                values.append(self.joint_upper_given(hist + (x_n,), f))
            gap = max(gap, max(values) - min(values))
        return gap

    # ------------------------------------------------------------------
    # Chapman-Kolmogorov path mass bounds.

    def path_mass_bounds(self, path: Sequence[str]) -> tuple[float, float]:
        """Tight (lower, upper) bounds on the mass of an initial path.

        upper = upper_1({x_1}) * prod_k T_k I_{x_{k+1}}(x_k); the lower
        bound is the analogous product of lower expectations.
        """
        m = len(path)
        if not 1 <= m <= self.horizon:
            raise ValueError("path length out of range")
        first = self.space.indicator([path[0]])
        up = self.initial.upper(first)
        lo = self.initial.lower(first)
        for k in range(1, m):
            ind = self.space.indicator([path[k]])
            op = self.operator_at(k)
            up *= op.apply(ind).at(path[k - 1])
            lo *= op.apply_lower(ind).at(path[k - 1])
        return lo, up

    def path_mass_bounds_given(
        self, n: int, x_n: str, path: Sequence[str]
    ) -> tuple[float, float]:
        """Bounds on the mass of X(n+1:m) = path given X(n) = x_n."""
        m = n + len(path)
        if not (1 <= n < m <= self.horizon):
            raise ValueError("conditional path indices out of range")
        up = 1.0
        lo = 1.0
        prev = x_n
        for j, x in enumerate(path):
            op = self.operator_at(n + j)
            ind = self.space.indicator([x])
            up *= op.apply(ind).at(prev)
            lo *= op.apply_lower(ind).at(prev)
            prev = x
        return lo, up
