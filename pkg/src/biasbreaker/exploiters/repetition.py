"""Exploiters that learn best responses by repeating each action "enough" times.

Playing action ``a_i`` for ``k_i`` rounds in a row (``a_n`` one extra round)
and reading the opponent's move in round ``k_1 + ... + k_i + 1`` yields a
best response to ``a_i`` whenever ``k_i`` is large enough for the opponent
at hand.  The Follow-the-Leader exploiters then predict with an ellipsoid
payoff estimate; the generic learner optionally predicts by halving.
"""

from __future__ import annotations

from collections.abc import Sequence

from ..opponents import OpponentSpec
from ..predictors import EllipsoidPredictor, HypothesisSpace
from .base import Decision, Exploiter


def constant_schedule(n: int, c: int) -> list[int]:
    if c < 1:
        raise ValueError("repetition count must be positive")
    return [c] * n


def multiple_schedule(n: int, b: int) -> list[int]:
    """Repeat each action ``b`` times the rounds played so far (``b`` times at the start)."""
    if b < 1:
        raise ValueError("multiple must be positive")
    reps, played = [], 0
    for _ in range(n):
        k = b * played if played else b
        reps.append(k)
        played += k
    return reps


def tripling_schedule(n: int) -> list[int]:
    """``3**(i-1)``: twice the rounds so far, plus one to beat ordering ties."""
    return [3**i for i in range(n)]


class RepetitionLearner(Exploiter):
    """Learning phase shared by every repetition-based exploiter.

    Subclasses override :meth:`after_learning`.  ``learning_rounds`` is the
    length of the learning phase, including the extra round on the last
    action.
    """

    name = "repetition"

    def __init__(self, n: int, reps: Sequence[int]):
        super().__init__(n)
        if len(reps) != n:
            raise ValueError(f"need one repetition count per action ({n}), got {len(reps)}")
        self.reps = list(reps)
        self.learning_rounds = sum(self.reps) + 1
        self.record_rounds: dict[int, int] = {}  # 1-based round -> action whose reply it is
        played = 0
        for a, k in enumerate(self.reps):
            played += k
            self.record_rounds[played + 1] = a

    def observe(self, obs) -> None:
        """Hook called after every round with the refreshed observation."""

    def play(self, obs):
        schedule = [a for a, k in enumerate(self.reps) for _ in range(k)] + [self.n - 1]
        for a in schedule:
            obs = yield Decision(a, "learn")
            self.observe(obs)
            target = self.record_rounds.get(len(obs.opponent_actions))
            if target is not None:
                self.table[target] = obs.opponent_actions[-1]
        yield from self.after_learning(obs)

    def after_learning(self, obs):
        raise NotImplementedError


class _EllipsoidFollowUp(RepetitionLearner):
    def __init__(self, n: int, reps: Sequence[int], window: int | None, horizon: int):
        super().__init__(n, reps)
        self.predictor = EllipsoidPredictor(n, "net", window=window, horizon=horizon)

    def observe(self, obs) -> None:
        self.predictor.record(obs.own_actions[-1], obs.opponent_actions[-1])

    def after_learning(self, obs):
        predictor = self.predictor
        while True:
            predicted = predictor.predict()
            obs = yield Decision(self.table[predicted], "predict", predicted)
            predictor.learn(obs.opponent_actions[-1])
            self.observe(obs)


class BeatFollowTheLeader(_EllipsoidFollowUp):
    name = "beat-ftl"

    def __init__(self, n: int, horizon: int = 1000):
        super().__init__(n, tripling_schedule(n), None, horizon)


class BeatLimitedFollowTheLeader(_EllipsoidFollowUp):
    name = "beat-ftl-limited"

    def __init__(self, n: int, window: int, horizon: int = 1000):
        super().__init__(n, constant_schedule(n, window), window, horizon)
        self.window = window


class GenericBestResponseLearner(RepetitionLearner):
    """Repetition learner for any opponent that eventually best-responds to a repeated action.

    With ``family`` the follow-up predicts by halving over that strategy
    family (all rounds, learning included, feed the vote).  Without it the
    follow-up assumes the opponent repeats its last action.
    """

    name = "generic-br"

    def __init__(
        self,
        n: int,
        c: int | None = None,
        b: int | None = None,
        family: Sequence[OpponentSpec] | None = None,
    ):
        if (c is None) == (b is None):
            raise ValueError("give exactly one of c (constant) or b (multiple)")
        reps = constant_schedule(n, c) if c is not None else multiple_schedule(n, b)
        super().__init__(n, reps)
        self.c, self.b = c, b
        self.predictor = HypothesisSpace.enumerate(family, n) if family else None

    @property
    def learning_bound(self) -> int:
        """Non-wins the learning phase can incur."""
        if self.c is not None:
            return self.c * self.n + 1
        return self.b * (self.b + 1) ** (self.n - 1) + 1

    def observe(self, obs) -> None:
        if self.predictor is not None:
            self.predictor.update(obs.own_actions[-1], obs.opponent_actions[-1])

    def after_learning(self, obs):
        while True:
            if self.predictor is not None:
                predicted = self.predictor.predict()
                phase = "halving"
            else:
                predicted = obs.opponent_actions[-1]
                phase = "repeat-guess"
            obs = yield Decision(self.table[predicted], phase, predicted)
            self.observe(obs)
