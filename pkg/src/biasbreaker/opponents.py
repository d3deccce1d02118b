"""Deterministic behaviorally-biased opponents.

Every opponent knows the true game, holds a fixed :class:`ActionOrdering`
used for tie-breaking (and, for win-stay lose-shift, as its shift cycle),
and sees the full history.  On the first round each opponent plays the first
action of its ordering.

The ``*_choose`` functions recompute a decision from scratch.  :class:`Opponent`
is the incremental form the arena and the predictors use; its cached state is
always reconstructible from the history and is checked against the
from-scratch functions in the test-suite.
"""

from __future__ import annotations

import random
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import SpecError
from .game import ActionOrdering, GameMatrix

Pairs = Sequence[tuple[int, int]]

KINDS = ("mbr", "mwr", "gambler", "wsls", "ftl", "hap")


def best_response(game: GameMatrix, order: ActionOrdering, target: int) -> int:
    """Ordering-earliest action maximizing the payoff against ``target``."""
    col = [row[target] for row in game.payoffs]
    best = max(col)
    return order.earliest(b for b, v in enumerate(col) if v == best)


def worst_response(game: GameMatrix, order: ActionOrdering, target: int) -> int:
    col = [row[target] for row in game.payoffs]
    worst = min(col)
    return order.earliest(b for b, v in enumerate(col) if v == worst)


def mbr_choose(game: GameMatrix, order: ActionOrdering, history: Pairs) -> int:
    if not history:
        return order.first
    return best_response(game, order, history[-1][0])


def mwr_choose(game: GameMatrix, order: ActionOrdering, history: Pairs) -> int:
    if not history:
        return order.first
    return worst_response(game, order, history[-1][0])


def gambler_choose(game: GameMatrix, order: ActionOrdering, history: Pairs) -> int:
    """Best response to our least-played action.

    Two-stage tie-break: the target is the ordering-earliest among the
    least-played actions, then the response is the ordering-earliest best
    response to that target.
    """
    counts = [0] * game.n
    for ours, _ in history:
        counts[ours] += 1
    fewest = min(counts)
    target = order.earliest(a for a, c in enumerate(counts) if c == fewest)
    return best_response(game, order, target)


def wsls_choose(game: GameMatrix, order: ActionOrdering, history: Pairs, tie_policy: str) -> int:
    if not history:
        return order.first
    ours, theirs = history[-1]
    v = game.payoffs[theirs][ours]
    if v == 1 or (v == 0 and tie_policy == "stay"):
        return theirs
    return order.successor(theirs)


def ftl_choose(game: GameMatrix, order: ActionOrdering, history: Pairs, window: int | None = None) -> int:
    """Best action in retrospect against our last ``window`` actions (all if None)."""
    recent = history if window is None else history[max(0, len(history) - window):]
    scores = [sum(row[ours] for ours, _ in recent) for row in game.payoffs]
    best = max(scores)
    return order.earliest(b for b, s in enumerate(scores) if s == best)


def hap_choose(game: GameMatrix, order: ActionOrdering, history: Pairs) -> int:
    """Action with the highest average payoff over the rounds it was played.

    Never-played actions average 0.  Averages are exact rationals so that
    ties are detected exactly.
    """
    totals = [0] * game.n
    plays = [0] * game.n
    for ours, theirs in history:
        totals[theirs] += game.payoffs[theirs][ours]
        plays[theirs] += 1
    avgs = [Fraction(t, c) if c else Fraction(0) for t, c in zip(totals, plays)]
    best = max(avgs)
    return order.earliest(b for b, a in enumerate(avgs) if a == best)


# --- specs ----------------------------------------------------------------------


@dataclass(frozen=True)
class OpponentSpec:
    """Which biased strategy an opponent uses, plus its parameters.

    ``ordering`` may be left unset in a spec parsed from text; the arena then
    draws one from the match seed.
    """

    kind: str
    tie_policy: str | None = None
    window: int | None = None
    ordering: ActionOrdering | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise SpecError(f"unknown opponent kind {self.kind!r}")
        if self.kind == "wsls" and self.tie_policy not in ("shift", "stay"):
            raise SpecError("wsls needs tie_policy 'shift' or 'stay'")
        if self.kind != "wsls" and self.tie_policy is not None:
            raise SpecError(f"{self.kind} takes no tie policy")
        if self.window is not None and (self.kind != "ftl" or self.window < 1):
            raise SpecError("window must be a positive integer and only applies to ftl")

    @property
    def label(self) -> str:
        """Spec string without the ordering suffix."""
        if self.kind == "wsls":
            return f"wsls:{self.tie_policy}"
        if self.kind == "ftl" and self.window is not None:
            return f"ftl:{self.window}"
        return "gambler" if self.kind == "gambler" else self.kind

    def with_ordering(self, ordering: ActionOrdering) -> OpponentSpec:
        return replace(self, ordering=ordering)

    def __str__(self) -> str:
        if self.ordering is None:
            return self.label
        return f"{self.label}@{self.ordering}"


def parse_opponent_spec(text: str) -> OpponentSpec:
    """Parse ``mbr``, ``wsls:shift``, ``ftl:5@2,0,1`` and friends."""
    body, _, perm = text.strip().partition("@")
    ordering = None
    if perm:
        try:
            ordering = ActionOrdering(tuple(int(x) for x in perm.split(",")))
        except ValueError as exc:
            raise SpecError(f"bad ordering in opponent spec {text!r}: {exc}") from None
    kind, _, arg = body.partition(":")
    if kind == "wsls":
        return OpponentSpec("wsls", tie_policy=arg or None, ordering=ordering)
    if kind == "ftl" and arg:
        try:
            window = int(arg)
        except ValueError:
            raise SpecError(f"bad ftl window {arg!r}") from None
        return OpponentSpec("ftl", window=window, ordering=ordering)
    if arg:
        raise SpecError(f"opponent {kind!r} takes no argument")
    return OpponentSpec(kind, ordering=ordering)


def choose(spec: OpponentSpec, game: GameMatrix, history: Pairs) -> int:
    """From-scratch decision for any spec (its ordering must be set)."""
    order = spec.ordering
    if order is None:
        raise SpecError("opponent spec has no ordering")
    if spec.kind == "mbr":
        return mbr_choose(game, order, history)
    if spec.kind == "mwr":
        return mwr_choose(game, order, history)
    if spec.kind == "gambler":
        return gambler_choose(game, order, history)
    if spec.kind == "wsls":
        return wsls_choose(game, order, history, spec.tie_policy)
    if spec.kind == "ftl":
        return ftl_choose(game, order, history, spec.window)
    return hap_choose(game, order, history)


class Opponent:
    """Incremental opponent: ``choose()`` the next action, then ``record()`` the round."""

    def __init__(self, spec: OpponentSpec, game: GameMatrix):
        if spec.ordering is None:
            raise SpecError("opponent spec has no ordering")
        if spec.ordering.n != game.n:
            raise SpecError(f"ordering has {spec.ordering.n} actions, game has {game.n}")
        self.spec = spec
        self.game = game
        self.order = spec.ordering
        self._by_rank = spec.ordering.order
        self.rounds = 0
        self._last: tuple[int, int] | None = None
        n = game.n
        kind = spec.kind
        if kind in ("mbr", "gambler"):
            self._response = [best_response(game, self.order, a) for a in range(n)]
        elif kind == "mwr":
            self._response = [worst_response(game, self.order, a) for a in range(n)]
        if kind == "gambler":
            self._counts = [0] * n
        elif kind == "ftl":
            self._scores = [0] * n
            self._recent: deque[int] = deque()
        elif kind == "hap":
            self._totals = [0] * n
            self._plays = [0] * n

    def choose(self) -> int:
        kind = self.spec.kind
        if kind in ("mbr", "mwr"):
            return self.order.first if self._last is None else self._response[self._last[0]]
        if kind == "gambler":
            counts = self._counts
            fewest = min(counts)
            target = next(a for a in self._by_rank if counts[a] == fewest)
            return self._response[target]
        if kind == "wsls":
            if self._last is None:
                return self.order.first
            ours, theirs = self._last
            v = self.game.payoffs[theirs][ours]
            if v == 1 or (v == 0 and self.spec.tie_policy == "stay"):
                return theirs
            return self.order.successor(theirs)
        if kind == "ftl":
            scores = self._scores
            best = max(scores)
            return next(b for b in self._by_rank if scores[b] == best)
        # hap: scan in ordering, keep strictly better averages (cross-multiplied)
        best_b, best_t, best_c = -1, 0, 1
        for b in self._by_rank:
            c = self._plays[b] or 1
            t = self._totals[b]
            if best_b < 0 or t * best_c > best_t * c:
                best_b, best_t, best_c = b, t, c
        return best_b

    def record(self, ours: int, theirs: int) -> None:
        self.rounds += 1
        self._last = (ours, theirs)
        kind = self.spec.kind
        if kind == "gambler":
            self._counts[ours] += 1
        elif kind == "ftl":
            for b, row in enumerate(self.game.payoffs):
                self._scores[b] += row[ours]
            if self.spec.window is not None:
                self._recent.append(ours)
                if len(self._recent) > self.spec.window:
                    old = self._recent.popleft()
                    for b, row in enumerate(self.game.payoffs):
                        self._scores[b] -= row[old]
        elif kind == "hap":
            self._totals[theirs] += self.game.payoffs[theirs][ours]
            self._plays[theirs] += 1


def default_ordering(n: int, seed: int) -> ActionOrdering:
    """Ordering drawn from the match seed when a spec leaves it unset."""
    return ActionOrdering.random(n, random.Random(f"ordering-{seed}"))
