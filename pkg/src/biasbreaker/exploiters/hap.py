"""Exploiter for the Highest Average Payoff opponent.

While some actions are still unplayed, the opponent walks through its
ordering and abandons an action exactly when its average turns negative,
which can only follow a loss.  Forcing those switches teaches us best
responses to the first ``n - 1`` actions of the ordering.  The last action
needs a longer push (its average only has to fall below the best of the
others, which is at least -1/2).  After that an average-score ellipsoid
estimate predicts the opponent.
"""

from __future__ import annotations

from ..errors import ModelMismatchError
from ..predictors import EllipsoidPredictor
from .base import Decision, Exploiter


class BeatHighestAverage(Exploiter):
    name = "beat-hap"

    def __init__(self, n: int, horizon: int = 1000):
        super().__init__(n)
        self.predictor = EllipsoidPredictor(n, "avg", horizon=horizon)
        self.learning_rounds: int | None = None
        self.holds: list[int] = []  # hold budget of every forcing action, in order

    def play(self, obs):
        n = self.n
        predictor = self.predictor
        played = [0] * n  # opponent play counts

        def observe(obs):
            own, opp = obs.own_actions, obs.opponent_actions
            played[opp[-1]] += 1
            predictor.record(own[-1], opp[-1])
            return len(opp) >= 2 and opp[-1] != opp[-2]

        # phase 1: force n - 1 switches, holding each action for the opponent's count + 1
        a, hold, used, tried, switches = 0, 1, 0, 1, 0
        self.holds.append(hold)
        while switches < n - 1:
            obs = yield Decision(a, "learn-order")
            used += 1
            own, opp = obs.own_actions, obs.opponent_actions
            if observe(obs):
                switches += 1
                self.table[opp[-2]] = own[-2]
                if switches == n - 1:
                    break
                tried = 1  # the switch round already tried our action against the new one
            elif used < hold:
                continue
            tried += 1
            if tried > n:
                raise ModelMismatchError("opponent did not switch after every action was tried")
            a = (a + 1) % n
            hold, used = played[opp[-1]] + 1, 0
            self.holds.append(hold)

        # phase 2: push the last action of the ordering off its spot
        last = opp[-1]
        a, hold, used, tried = (own[-1] + 1) % n, 3 * max(1, played[last]), 0, 2
        self.holds.append(hold)
        while True:
            obs = yield Decision(a, "learn-last")
            used += 1
            own, opp = obs.own_actions, obs.opponent_actions
            if observe(obs):
                self.table[opp[-2]] = own[-2]
                break
            if used < hold:
                continue
            tried += 1
            if tried > n:
                raise ModelMismatchError("opponent kept its last action against every action")
            a = (a + 1) % n
            hold, used = 3 * max(1, played[last]), 0
            self.holds.append(hold)
        self.learning_rounds = len(own)

        while True:
            predicted = predictor.predict()
            obs = yield Decision(self.table[predicted], "predict", predicted)
            predictor.learn(obs.opponent_actions[-1])
            observe(obs)
