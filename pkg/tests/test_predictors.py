from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from biasbreaker.arena import ghost_point
from biasbreaker.errors import CapacityError, ConditioningError, ModelMismatchError
from biasbreaker.game import ActionOrdering, builtin_game, generate_permissible
from biasbreaker.opponents import Opponent, OpponentSpec
from biasbreaker.predictors import (
    Ellipsoid,
    EllipsoidPredictor,
    HypothesisSpace,
    constraint_margin,
    mistake_constraint,
)

MBR = OpponentSpec("mbr")
GAMBLER = OpponentSpec("gambler")


@pytest.mark.parametrize("family, size", [((MBR,), 162), ((GAMBLER,), 162), ((MBR, GAMBLER), 324)])
def test_space_sizes(family, size):
    space = HypothesisSpace.enumerate(family, 3)
    assert len(space) == size
    assert space.mistake_bound() == oracles.halving_bound(size)


def test_space_guard():
    with pytest.raises(CapacityError):
        HypothesisSpace.enumerate((MBR,), 4)


def test_empty_space_faults():
    space = HypothesisSpace([])
    with pytest.raises(ModelMismatchError):
        space.predict()


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(MBR,), (GAMBLER,), (MBR, GAMBLER)]), st.integers(0, 10**5))
def test_halving_mistakes_and_survival(family, seed):
    rng = random.Random(seed)
    space = HypothesisSpace.enumerate(family, 3)
    game = generate_permissible(3, seed)
    truth = rng.choice(family).with_ordering(ActionOrdering.random(3, rng))
    opponent = Opponent(truth, game)
    mistakes = 0
    for _ in range(120):
        predicted = space.predict()
        ours = rng.randrange(3)
        actual = opponent.choose()
        opponent.record(ours, actual)
        before = len(space)
        dropped = space.update(ours, actual)
        mistakes += predicted != actual
        if predicted != actual:
            assert len(space) <= before // 2
        assert dropped == before - len(space)
        assert space.contains(truth, game)
    assert mistakes <= space.mistake_bound()


def test_cut_matches_determinant_oracle_and_keeps_half():
    rng = np.random.default_rng(0)
    for dim in (4, 9, 16):
        e = Ellipsoid(dim, 2.0)
        for _ in range(10):
            w = rng.normal(size=dim)
            center, shape = e.center.copy(), e.shape.copy()
            e.cut(w)
            ratio = oracles.ellipsoid_volume_ratio(shape, e.shape)
            assert ratio < Ellipsoid.volume_ratio_bound(dim)
            # boundary points of the kept half stay inside the new ellipsoid
            chol = np.linalg.cholesky(shape)
            for _ in range(50):
                u = rng.normal(size=dim)
                x = center + chol @ (u / np.linalg.norm(u)) * rng.uniform(0, 1)
                if w @ x >= w @ center:
                    assert oracles.inside(e.center, e.shape, x)


def test_log_volume_and_bound_values():
    e = Ellipsoid(9, 3.0)
    assert e.log_volume() == pytest.approx(9 * math.log(3.0))
    assert Ellipsoid.volume_ratio_bound(9) == pytest.approx(math.exp(-1 / 20))


def test_degenerate_cut_raises():
    e = Ellipsoid(4, 1.0)
    with pytest.raises(ConditioningError):
        e.cut(np.zeros(4))
    e.shape = np.diag([1.0, 1.0, 1.0, 0.0])
    with pytest.raises(ConditioningError):
        e.cut(np.array([0.0, 0.0, 0.0, 1.0]))


def test_margin_values():
    assert constraint_margin(3, "net", 1000) == pytest.approx(1 / (2 * 1000 * 6))
    assert constraint_margin(4, "avg", 5) == pytest.approx(1 / (2 * 25 * 12))


def test_mistake_constraint_weights():
    c = mistake_constraint(np.array([2.0, 0.0, 1.0]), 0, 1, "net", 0.1)
    assert c.weights[1].tolist() == [2.0, 0.0, 1.0]
    assert c.weights[0].tolist() == [-2.0, 0.0, -1.0]
    counts = np.array([[0, 0, 0], [1, 1, 0], [0, 0, 0]], dtype=float)
    c = mistake_constraint(counts, 0, 1, "avg", 0.1)
    assert c.weights[1].tolist() == [0.5, 0.5, 0.0]
    assert not c.weights[0].any()
    with pytest.raises(ValueError):
        mistake_constraint(counts, 1, 1, "avg", 0.1)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 5), st.integers(0, 10**5), st.sampled_from([None, 1, 3]))
def test_ghost_point_satisfies_every_net_constraint(n, seed, window):
    """Ties broken by the ordering become strict once the ghost bonus is added."""
    rng = random.Random(seed)
    game = generate_permissible(n, seed)
    order = ActionOrdering.random(n, rng)
    rounds = 60
    span = window or rounds
    predictor = EllipsoidPredictor(n, "net", window=window, horizon=rounds)
    opponent = Opponent(OpponentSpec("ftl", window=window, ordering=order), game)
    ghost = ghost_point(game, order, "net", span)
    for t in range(rounds):
        ours = rng.randrange(n)
        actual = opponent.choose()
        opponent.record(ours, actual)
        if t > 0:  # an empty history carries no constraint
            predictor.predict()
            predictor.learn(actual)
        predictor.record(ours, actual)
    assert all(c.satisfied_by(ghost) for c in predictor.constraints)
    assert all(r < Ellipsoid.volume_ratio_bound(n * n) for r in predictor.volume_ratios)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 4), st.integers(0, 10**5))
def test_ghost_point_satisfies_every_avg_constraint(n, seed):
    rng = random.Random(seed)
    game = generate_permissible(n, seed)
    order = ActionOrdering.random(n, rng)
    rounds = 60
    predictor = EllipsoidPredictor(n, "avg", horizon=rounds)
    opponent = Opponent(OpponentSpec("hap", ordering=order), game)
    ghost = ghost_point(game, order, "avg", rounds)
    for t in range(rounds):
        # predict only once every action has an average, as the exploiter does
        ours = t % n if t < n * n else rng.randrange(n)
        actual = t // n % n if t < n * n else opponent.choose()
        if t >= n * n:
            predictor.predict()
            predictor.learn(actual)
        opponent.record(ours, actual)
        predictor.record(ours, actual)
    assert all(c.satisfied_by(ghost) for c in predictor.constraints)


def test_predictor_windowed_counts():
    p = EllipsoidPredictor(3, "net", window=2)
    for ours in (0, 1, 2):
        p.record(ours, 0)
    assert p.counts().tolist() == [0.0, 1.0, 1.0]


def test_learn_requires_prediction():
    p = EllipsoidPredictor(3)
    with pytest.raises(RuntimeError):
        p.learn(0)
    with pytest.raises(ValueError):
        EllipsoidPredictor(3, mode="median")


def test_windowed_predictor_stops_missing_on_rps():
    game = builtin_game("rps")
    opponent = Opponent(OpponentSpec("ftl", window=1, ordering=ActionOrdering.identity(3)), game)
    predictor = EllipsoidPredictor(3, "net", window=1, horizon=200)
    late_mistakes = 0
    for t in range(200):
        ours = t % 3
        actual = opponent.choose()
        opponent.record(ours, actual)
        if t > 0:
            predictor.predict()
            late_mistakes += not predictor.learn(actual) and t >= 100
        predictor.record(ours, actual)
    assert late_mistakes == 0
