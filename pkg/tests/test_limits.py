import numpy as np
import pytest

from credalmc import (
    ConvergenceError,
    ImpreciseMarkovChain,
    NotRegularError,
    StateSpace,
    UpperTransitionOperator,
    contamination_evolve,
    contamination_limit,
    detect_cycle,
    expectation,
    limit_upper,
    precise_stationary,
)
from helpers import random_gamble

AB = StateSpace(["a", "b"])

EX53_LIMIT = 0.5 + 0.05 / 0.37  # geometric series: max T^k I_a = 0.5 + 0.5 * 0.7^k


def contaminated(matrix, eps):
    return UpperTransitionOperator.contamination_of(AB, matrix, eps)


class TestLimitUpper:
    def test_contaminated_cycle_gives_max(self):
        rng = np.random.default_rng(61)
        for eps in (0.1, 0.5, 0.9):
            op = contaminated([[0.0, 1.0], [1.0, 0.0]], eps)
            for _ in range(5):
                h = random_gamble(rng, AB)
                assert limit_upper(op, h, tol=1e-11).value == pytest.approx(
                    h.max(), abs=1e-9
                )

    def test_contaminated_random_walk(self):
        rng = np.random.default_rng(67)
        eps = 0.1
        op = contaminated([[0.5, 0.5], [0.5, 0.5]], eps)
        h = AB.indicator(["a"])
        assert limit_upper(op, h, tol=1e-11).value == pytest.approx(0.55, abs=1e-9)
        for _ in range(5):
            h = random_gamble(rng, AB)
            want = eps * h.max() + (1 - eps) * h.values.mean()
            assert limit_upper(op, h, tol=1e-11).value == pytest.approx(want, abs=1e-9)

    def test_example_series_value(self, ex53_op, ab):
        got = limit_upper(ex53_op, ab.indicator(["a"]), tol=1e-10)
        assert got.value == pytest.approx(EX53_LIMIT, abs=1e-6)
        assert got.residual <= 1e-10

    def test_nonconvergence_raises(self, cycle_op, ab):
        with pytest.raises(ConvergenceError):
            limit_upper(cycle_op, ab.indicator(["a"]), tol=1e-10, max_iter=100)

    def test_invariance_of_limit(self, ex53_op, ex54_op):
        rng = np.random.default_rng(71)
        for op in (ex53_op, ex54_op):
            for _ in range(5):
                h = random_gamble(rng, op.space)
                tol = 1e-10
                v1 = limit_upper(op, h, tol=tol).value
                v2 = limit_upper(op, op.apply(h), tol=tol).value
                assert abs(v1 - v2) <= 2 * tol

    def test_bounded_iterates(self, ex53_op, cycle_op):
        rng = np.random.default_rng(73)
        for op in (ex53_op, cycle_op):
            h = random_gamble(rng, AB)
            bound = h.sup_norm()
            g = h
            for _ in range(50):
                g = op.apply(g)
                assert g.sup_norm() <= bound + 1e-12


class TestContaminationLimit:
    def test_matches_iteration(self, ex53_precise_op, ex53_op, ab):
        rng = np.random.default_rng(79)
        for _ in range(5):
            h = random_gamble(rng, ab)
            tol = 1e-10
            series = contamination_limit(ex53_precise_op, 0.1, h, tol=tol)
            iterated = limit_upper(ex53_op, h, tol=tol).value
            assert abs(series - iterated) <= 2 * tol

    def test_cycle_and_walk_closed_forms(self):
        h = AB.indicator(["a"])
        cyc = UpperTransitionOperator.from_matrix(AB, [[0.0, 1.0], [1.0, 0.0]])
        walk = UpperTransitionOperator.from_matrix(AB, [[0.5, 0.5], [0.5, 0.5]])
        assert contamination_limit(cyc, 0.3, h, tol=1e-12) == pytest.approx(1.0)
        assert contamination_limit(walk, 0.1, h, tol=1e-12) == pytest.approx(0.55)

    def test_example_value(self, ex53_precise_op, ab):
        got = contamination_limit(ex53_precise_op, 0.1, ab.indicator(["a"]), tol=1e-9)
        assert got == pytest.approx(EX53_LIMIT, abs=1e-6)


class TestContaminationEvolve:
    def test_n_zero_is_initial_upper(self, ex53_initial, ex53_precise_op, ab):
        got = contamination_evolve(
            ex53_initial, ex53_precise_op, 0.1, ab.indicator(["a"]), 0
        )
        assert got == pytest.approx(0.9)

    def test_one_step_hand_value(self, ex53_initial, ex53_precise_op, ab):
        got = contamination_evolve(
            ex53_initial, ex53_precise_op, 0.1, ab.indicator(["a"]), 1
        )
        assert got == pytest.approx(0.487)

    def test_agrees_with_marginal_recursion(
        self, ex53_initial, ex53_precise_op, ex53_op, ab
    ):
        chain = ImpreciseMarkovChain(ex53_initial, ex53_op, 51)
        rng = np.random.default_rng(83)
        for h in [ab.indicator(["a"]), random_gamble(rng, ab)]:
            for n in range(0, 51, 5):
                closed = contamination_evolve(ex53_initial, ex53_precise_op, 0.1, h, n)
                assert closed == pytest.approx(
                    chain.marginal_upper(n + 1, h), abs=1e-12
                )


class TestPreciseStationary:
    def test_example_boundary_matrix(self):
        op = UpperTransitionOperator.from_matrix(
            AB, [[0.135, 0.865], [0.865, 0.135]]
        )
        pi = precise_stationary(op, tol=1e-12)
        assert list(pi.weights) == pytest.approx([0.5, 0.5], abs=1e-9)

    def test_identity_not_regular(self):
        op = UpperTransitionOperator.from_matrix(AB, [[1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(NotRegularError):
            precise_stationary(op)

    def test_doubly_stochastic_symmetric_uniform(self):
        space = StateSpace(["a", "b", "c"])
        q = np.array([[0.5, 0.3, 0.2], [0.3, 0.4, 0.3], [0.2, 0.3, 0.5]])
        pi = precise_stationary(
            UpperTransitionOperator.from_matrix(space, q), tol=1e-13
        )
        assert list(pi.weights) == pytest.approx([1 / 3] * 3, abs=1e-9)

    def test_fixed_point_and_limit_agreement(self):
        rng = np.random.default_rng(89)
        space = StateSpace(["a", "b", "c"])
        q = rng.dirichlet(np.ones(3), size=3)
        op = UpperTransitionOperator.from_matrix(space, q)
        tol = 1e-12
        pi = precise_stationary(op, tol=tol)
        assert np.abs(pi.weights @ q - pi.weights).max() <= 10 * tol
        h = random_gamble(rng, space)
        assert expectation(pi, h) == pytest.approx(
            limit_upper(op, h, tol=tol).value, abs=1e-9
        )

    def test_rejects_imprecise_rows(self, ex53_op):
        with pytest.raises(ValueError):
            precise_stationary(ex53_op)


class TestDetectCycle:
    def test_precise_two_cycle(self, cycle_op, ab):
        rep = detect_cycle(cycle_op, ab.indicator(["a"]), tol=1e-12)
        assert rep.period == 2
        assert list(rep.representative.values) == pytest.approx([1.0, 0.0])
        assert rep.residual <= 1e-12

    def test_regular_operator_period_one(self, ex53_op, ab):
        rep = detect_cycle(ex53_op, ab.indicator(["a"]), tol=1e-10)
        assert rep.period == 1
        assert rep.representative.max() - rep.representative.min() <= 1e-8

    def test_constant_gamble_immediate(self, cycle_op, ab):
        rep = detect_cycle(cycle_op, ab.constant(0.4), tol=1e-12)
        assert rep.period == 1
        assert rep.iterations == 0

    def test_cycle_invariant(self, cycle_op, ab):
        rng = np.random.default_rng(97)
        h = random_gamble(rng, ab)
        rep = detect_cycle(cycle_op, h, tol=1e-12)
        back = cycle_op.power(rep.representative, rep.period)
        assert back.sup_dist(rep.representative) <= 1e-12
