"""Exploiters for the two win-stay lose-shift variants, and a probe telling them apart.

Against either variant, once we know the opponent's shift cycle and a best
response to every action, winning is self-sustaining: the opponent loses,
shifts to the successor we predicted, and loses again.
"""

from __future__ import annotations

from ..errors import ModelMismatchError
from .base import Decision, Exploiter


def _cycle(order: list[int]) -> dict[int, int]:
    return {a: order[(k + 1) % len(order)] for k, a in enumerate(order)}


class BeatTieShift(Exploiter):
    """Beats the variant that shifts after ties as well as losses.

    The shift cycle is known as soon as ``n - 1`` distinct actions have been
    seen in shift order: the remaining action closes the cycle.
    """

    name = "beat-wsls-shift"

    def __init__(self, n: int):
        super().__init__(n)
        self.cycle: list[int] = []

    def play(self, obs):
        n = self.n
        opp = obs.opponent_actions
        # our actions run cyclically so every stretch against one opponent
        # action tries distinct actions; a tie or a win forces a shift within n-1 rounds
        k = 0
        obs = yield Decision(k, "learn-order")
        opp = obs.opponent_actions
        seen = [opp[-1]]
        while len(seen) < n - 1:
            k += 1
            obs = yield Decision(k % n, "learn-order")
            opp = obs.opponent_actions
            if opp[-1] != opp[-2]:
                if opp[-1] in seen:
                    raise ModelMismatchError("opponent revisited an action before completing its cycle")
                seen.append(opp[-1])
        seen.extend(a for a in range(n) if a not in seen)
        self.cycle = seen
        successor = _cycle(seen)

        for a in range(n):
            replies: list[int] = []
            while True:
                obs = yield Decision(a, "learn-br")
                opp = obs.opponent_actions
                q = opp[-1]
                if replies and q == replies[-1]:
                    break  # it stayed, so it beat a
                replies.append(q)
                if len(replies) == n:
                    break  # n-1 shifts against a: the last action is the one that beats it
            self.table[a] = q

        # the opponent just beat our last action and will repeat
        last = opp[-1]
        obs = yield Decision(self.table[last], "steer", last)
        while True:
            predicted = successor[obs.opponent_actions[-1]]
            obs = yield Decision(self.table[predicted], "exploit", predicted)


class BeatTieStay(Exploiter):
    """Beats the variant that stays after ties.

    Each shift means our previous action beat the opponent's previous
    action, so ``n`` forced shifts give both the cycle and a full best
    response table.
    """

    name = "beat-wsls-stay"

    def __init__(self, n: int):
        super().__init__(n)
        self.cycle: list[int] = []

    def play(self, obs):
        n = self.n
        k = 0
        obs = yield Decision(k, "learn")
        opp, own = obs.opponent_actions, obs.own_actions
        cycle = [opp[-1]]
        shifts = 0
        while shifts < n:
            k += 1
            obs = yield Decision(k % n, "learn")
            opp, own = obs.opponent_actions, obs.own_actions
            if opp[-1] != opp[-2]:
                shifts += 1
                self.table[opp[-2]] = own[-2]
                if shifts < n:
                    if opp[-1] in cycle:
                        raise ModelMismatchError("opponent revisited an action before completing its cycle")
                    cycle.append(opp[-1])
                elif opp[-1] != cycle[0]:
                    raise ModelMismatchError("opponent cycle did not close")
        self.cycle = cycle
        successor = _cycle(cycle)

        # hold our last action until the opponent repeats; it then repeats once more
        a = own[-1]
        while True:
            obs = yield Decision(a, "settle")
            opp = obs.opponent_actions
            if opp[-1] == opp[-2]:
                break
        b = opp[-1]
        obs = yield Decision(self.table[b], "steer", b)
        while True:
            predicted = successor[obs.opponent_actions[-1]]
            obs = yield Decision(self.table[predicted], "exploit", predicted)


class WSLSAuto(Exploiter):
    """Find out whether a win-stay lose-shift opponent stays or shifts on ties, then beat it.

    The probe holds action 0.  Until a tie, the opponent walks its ordering
    through actions that lose to 0 and then sits on the first action that is
    0 or beats 0.  At most ``n - 2`` actions lose to 0, so by round ``n - 1``
    it has stopped; copying its last action then forces a tie by round ``n``
    (sooner when it repeats early).  The reply to the tie reveals the policy.
    That reply is observed in a round where we play action 0, which is also
    the first move of both delegate exploiters, so the delegate takes over
    from that round on.
    """

    name = "wsls-auto"

    def __init__(self, n: int):
        super().__init__(n)
        self.tie_policy: str | None = None
        self.probe_length: int | None = None  # rounds played before the delegate took over
        self.decided_after: int | None = None  # rounds played when the policy became known
        self.delegate: Exploiter | None = None

    def play(self, obs):
        n = self.n
        obs = yield Decision(0, "probe")
        while obs.opponent_actions[-1] != obs.own_actions[-1]:
            opp = obs.opponent_actions
            rounds = len(opp)
            if obs.own_actions[-1] != 0 or rounds >= n:
                raise ModelMismatchError("probe forced no tie: opponent is not win-stay lose-shift")
            held = rounds >= 2 and opp[-1] == opp[-2]
            obs = yield Decision(opp[-1] if held or rounds >= n - 1 else 0, "probe")
        tied = obs.own_actions[-1]

        start = len(obs.own_actions)
        obs = yield Decision(0, "probe")
        reply = obs.opponent_actions[-1]
        self.tie_policy = "stay" if reply == tied else "shift"
        self.probe_length = start
        self.decided_after = start + 1

        delegate = BeatTieStay(self.n) if self.tie_policy == "stay" else BeatTieShift(self.n)
        self.delegate = delegate
        self.table = delegate.table
        first = delegate.act(obs.since(start, start))
        if first.action != 0:
            raise ModelMismatchError("delegate does not open with action 0")
        live = obs.since(start)
        while True:
            d = delegate.act(live)
            obs = yield Decision(d.action, f"{self.tie_policy}/{d.phase}", d.predicted)
