"""Exploiters for the Myopic Best Responder and the Gambler's Fallacy opponent."""

from __future__ import annotations

from .base import Decision, Exploiter


class BeatMyopicBestResponder(Exploiter):
    """Learn a best response to every action in ``n + 1`` rounds, then win forever.

    Rounds ``1..n`` play each action once and round ``n + 1`` replays action
    0.  The opponent's reply in round ``r`` answers our round ``r - 1``
    action.  Afterwards the opponent's next move is the recorded reply to our
    last action, and we play the recorded reply to that.
    """

    name = "beat-mbr"

    def play(self, obs):
        n = self.n
        for a in (*range(n), 0):
            obs = yield Decision(a, "learn")
            if len(obs.own_actions) >= 2:
                self.table[obs.own_actions[-2]] = obs.opponent_actions[-1]
        while True:
            predicted = self.table[obs.own_actions[-1]]
            obs = yield Decision(self.table[predicted], "exploit", predicted)


class BeatGamblersFallacy(Exploiter):
    name = "beat-gambler"

    def play(self, obs):
        n = self.n
        last = n - 1
        for a in range(n):
            obs = yield Decision(a, "learn-br")
        # our last action is the only unplayed one, so this reply answers it
        br_last = obs.opponent_actions[-1]
        self.table[last] = br_last

        order = list(range(n))
        order[br_last], order[last] = order[last], order[br_last]
        for a in order:
            obs = yield Decision(a, "learn-br-br")
        # br_last is now the only action played once
        br_br = obs.opponent_actions[-1]
        self.table[br_last] = br_br

        for a in range(n - 1):
            obs = yield Decision(a, "steer")
        # the last action stays most overdue while we repeat br_br, since br_br != last
        while True:
            obs = yield Decision(br_br, "exploit", br_last)
