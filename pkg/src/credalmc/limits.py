"""Long-run behaviour of stationary upper transition operators.

Under regularity the iterates T^n h flatten to a constant gamble whose
level is the invariant upper expectation of h; `limit_upper` detects
this through the oscillation max - min of the iterate.  Non-regular
operators are still non-expansive in the supremum norm, so their
iterates settle into a periodic limit cycle, found by `detect_cycle`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import Gamble, MassFunction
from .transition import UpperTransitionOperator

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10**6


class ConvergenceError(RuntimeError):
    """An iteration ceiling was reached before the stop criterion."""


class NotRegularError(ValueError):
    """The operator failed the bounded regularity search."""


@dataclass(frozen=True)
class LimitReport:
    value: float
    iterations: int
    residual: float


@dataclass(frozen=True)
class CycleReport:
    period: int
    representative: Gamble
    residual: float
    iterations: int


def limit_upper(
    op: UpperTransitionOperator,
    h: Gamble,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> LimitReport:
    """Invariant upper expectation of h for a regular stationary operator.

    Iterates h <- T h until the oscillation max(h) - min(h) drops to tol.
    The reported value is max(h) at stop, so with residual r the true
    limit lies within [value - r, value]: truncation stays conservative
    for an upper expectation.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    for it in range(max_iter + 1):
        residual = h.max() - h.min()
        if residual <= tol:
            return LimitReport(value=h.max(), iterations=it, residual=residual)
        h = op.apply(h)
    raise ConvergenceError(
        f"oscillation still {h.max() - h.min():.3e} after {max_iter} iterations; "
        "the operator may not be regular - try detect_cycle"
    )


def contamination_limit(
    precise: UpperTransitionOperator,
    epsilon: float,
    h: Gamble,
    tol: float = DEFAULT_TOL,
) -> float:
    """Closed-form invariant upper expectation of a contamination model.

    Evaluates eps * sum_k (1 - eps)^k max T^k h, truncating once the
    geometric tail bound (1 - eps)^(K+1) * max|h| drops below tol.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    bound = h.sup_norm()
    total = 0.0
    weight = epsilon
    g = h
    k = 0
    while (1.0 - epsilon) ** (k) * bound > tol or k == 0:
        total += weight * g.max()
        g = precise.apply(g)
        weight *= 1.0 - epsilon
        k += 1
    return total


def contamination_evolve(
    initial,
    precise: UpperTransitionOperator,
    epsilon: float,
    h: Gamble,
    n: int,
) -> float:
    """Upper expectation of h(X(n+1)) under a contamination chain.

    (1 - eps)^n * upper_1(T^n h) + eps * sum_{k<n} (1 - eps)^k max T^k h.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if n < 0:
        raise ValueError("n must be >= 0")
    total = 0.0
    g = h
    for k in range(n):
        total += epsilon * (1.0 - epsilon) ** k * g.max()
        g = precise.apply(g)
    return (1.0 - epsilon) ** n * initial.upper(g) + total


def precise_stationary(
    op: UpperTransitionOperator,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> MassFunction:
    """Stationary distribution of a regular precise operator.

    Power-iterates the adjoint mass update m(y) <- sum_x m(x) q(y|x)
    from the uniform start until the sup-norm change drops to tol.
    Serves as the independent classical oracle for the limit machinery.
    """
    if not op.is_precise():
        raise ValueError("precise_stationary needs all-Linear rows")
    if op.is_regular() is None:
        raise NotRegularError(
            "operator is not regular within the Wielandt bound"
        )
    q = np.array([row.mass.weights for row in op.rows])
    m = np.full(len(op.space), 1.0 / len(op.space))
    for _ in range(max_iter):
        nxt = m @ q
        if np.abs(nxt - m).max() <= tol:
            return MassFunction(op.space, nxt)
        m = nxt
    raise ConvergenceError("stationary iteration did not converge")


def detect_cycle(
    op: UpperTransitionOperator,
    h: Gamble,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    max_period: int | None = None,
) -> CycleReport:
    """Find the periodic limit cycle of the iterates T^n h.

    Searches the recent history for the smallest period p whose
    p-periodicity is sustained over a full extra period (2p + 1 iterates
    matching pairwise at lag p).  The representative is the earliest
    iterate of the verified cycle and `iterations` its index in the
    iterate sequence.  The search window is heuristic: no bound on
    periods of upper operators is known.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_period is None:
        max_period = 2 * len(op.space) ** 2
    window = 2 * max_period + 1
    history = [h]
    base = 0  # iterate index of history[0]
    for _ in range(max_iter):
        for p in range(1, max_period + 1):
            if len(history) < 2 * p + 1:
                break
            if all(
                history[-1 - j].sup_dist(history[-1 - j - p]) <= tol
                for j in range(p + 1)
            ):
                rep = history[-1 - 2 * p]
                residual = op.power(rep, p).sup_dist(rep)
                return CycleReport(
                    period=p,
                    representative=rep,
                    residual=residual,
                    iterations=base + len(history) - 1 - 2 * p,
                )
        history.append(op.apply(history[-1]))
        if len(history) > window:
            del history[0]
            base += 1
    raise ConvergenceError(
        f"no cycle of period <= {max_period} found in {max_iter} iterations; "
        "the search window may be too small"
    )


def invariant_singleton_bounds(
    op: UpperTransitionOperator,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> dict[str, tuple[float, float]]:
    """Outer approximation of the invariant credal set by singleton bounds."""
    out = {}
    for x in op.space:
        ind = op.space.indicator([x])
        up = limit_upper(op, ind, tol, max_iter).value
        lo = -limit_upper(op, -ind, tol, max_iter).value
        out[x] = (lo, up)
    return out
