import numpy as np
import pytest

from credalmc import (
    DimensionMismatch,
    Gamble,
    Linear,
    MassFunction,
    StateSpace,
    UpperTransitionOperator,
)
from helpers import random_any_model, random_gamble

AB = StateSpace(["a", "b"])


def test_apply_precise_rows(ex53_precise_op, ab):
    out = ex53_precise_op.apply(ab.indicator(["a"]))
    assert list(out.values) == pytest.approx([0.15, 0.85])


def test_apply_contamination_rows(ex53_op, ab):
    out = ex53_op.apply(ab.indicator(["a"]))
    assert list(out.values) == pytest.approx([0.235, 0.865])


def test_apply_interval_rows(ex54_op, abc):
    out = ex54_op.apply(Gamble(abc, [1.0, 0.5, 0.0]))
    assert out.at("b") == pytest.approx(0.84)


def test_apply_lower_contamination(ex53_op, ab):
    out = ex53_op.apply_lower(ab.indicator(["a"]))
    assert list(out.values) == pytest.approx([0.135, 0.765])


def test_apply_lower_equals_apply_for_precise(ex53_precise_op, ab):
    rng = np.random.default_rng(3)
    for _ in range(10):
        h = random_gamble(rng, ab)
        up = ex53_precise_op.apply(h)
        lo = ex53_precise_op.apply_lower(h)
        assert up.sup_dist(lo) <= 1e-14


def test_apply_lower_constant(ex53_op, ab):
    c = ab.constant(3.25)
    assert list(ex53_op.apply_lower(c).values) == pytest.approx([3.25, 3.25])


def test_power_zero_is_identity(ex53_op, ab):
    h = Gamble(ab, [0.4, -1.0])
    assert ex53_op.power(h, 0) is h


def test_power_two_cycle(cycle_op, ab):
    rng = np.random.default_rng(5)
    for _ in range(5):
        h = random_gamble(rng, ab)
        assert cycle_op.power(h, 2).sup_dist(h) <= 1e-14


def test_power_example_matrix(ex53_precise_op, ab):
    out = ex53_precise_op.power(ab.indicator(["a"]), 2)
    assert list(out.values) == pytest.approx(
        [0.5 + 0.5 * 0.49, 0.5 - 0.5 * 0.49]
    )


def test_regular_contamination_found_at_one(ex53_op):
    assert ex53_op.is_regular(5) == 1


def test_cycle_not_regular(cycle_op):
    assert cycle_op.is_regular(50) is None


def test_interval_operator_regular(ex54_op):
    n = ex54_op.is_regular(9)
    assert n is not None and n <= 9


def test_default_n_max():
    assert UpperTransitionOperator.from_matrix(AB, [[0.5, 0.5], [0.5, 0.5]]).default_n_max() == 2


def test_row_count_checked(ab):
    with pytest.raises(DimensionMismatch):
        UpperTransitionOperator(ab, [Linear(MassFunction(ab, [1.0, 0.0]))])


def _random_operators(seed=23, count=25):
    rng = np.random.default_rng(seed)
    ops = []
    for _ in range(count):
        space = StateSpace(["a", "b", "c"][: rng.integers(2, 4)])
        rows = [random_any_model(rng, space) for _ in space.labels]
        ops.append(UpperTransitionOperator(space, rows))
    return ops


@pytest.mark.parametrize("op", _random_operators())
def test_nonexpansive_monotone_constant(op):
    rng = np.random.default_rng(29)
    for _ in range(5):
        g = random_gamble(rng, op.space)
        h = random_gamble(rng, op.space)
        assert op.apply(g).sup_dist(op.apply(h)) <= g.sup_dist(h) + 1e-12
        low = g.pointwise_min(h)
        assert np.all(op.apply(low).values <= op.apply(g).values + 1e-12)
        assert np.all(op.apply_lower(h).values <= op.apply(h).values + 1e-12)
    c = rng.uniform(-5, 5)
    out = op.apply(op.space.constant(c))
    assert np.abs(out.values - c).max() <= 1e-12


def test_precise_apply_matches_matrix_product():
    rng = np.random.default_rng(31)
    for _ in range(10):
        q = rng.dirichlet(np.ones(3), size=3)
        space = StateSpace(["a", "b", "c"])
        op = UpperTransitionOperator.from_matrix(space, q)
        h = random_gamble(rng, space)
        assert np.abs(op.apply(h).values - q @ h.values).max() <= 1e-12
