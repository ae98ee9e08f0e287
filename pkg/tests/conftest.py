"""Shared fixtures: the worked two- and three-state models used throughout."""

from __future__ import annotations

import numpy as np
import pytest

from credalmc import (
    ImpreciseMarkovChain,
    ProbInterval,
    StateSpace,
    UpperTransitionOperator,
)

AB = StateSpace(["a", "b"])
ABC = StateSpace(["a", "b", "c"])

EX53_MATRIX = [[0.15, 0.85], [0.85, 0.15]]
EX53_EPS = 0.1

EX54_LOWER = np.array([[9, 9, 162], [144, 18, 18], [9, 162, 9]]) / 200.0
EX54_UPPER = np.array([[19, 19, 172], [154, 28, 28], [19, 172, 19]]) / 200.0


@pytest.fixture
def ab():
    return AB


@pytest.fixture
def abc():
    return ABC


@pytest.fixture
def ex53_initial():
    return ProbInterval(AB, [0.6, 0.1], [0.9, 0.4])


@pytest.fixture
def ex53_precise_op():
    return UpperTransitionOperator.from_matrix(AB, EX53_MATRIX)


@pytest.fixture
def ex53_op():
    return UpperTransitionOperator.contamination_of(AB, EX53_MATRIX, EX53_EPS)


@pytest.fixture
def ex53_chain(ex53_initial, ex53_op):
    return ImpreciseMarkovChain(ex53_initial, ex53_op, 25)


@pytest.fixture
def ex54_op():
    return UpperTransitionOperator.from_interval_matrices(
        ABC, EX54_LOWER, EX54_UPPER
    )


@pytest.fixture
def cycle_op():
    return UpperTransitionOperator.from_matrix(AB, [[0.0, 1.0], [1.0, 0.0]])
