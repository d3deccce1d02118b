"""Reference agents: the lexicographic model-follower, a halving prober, scripts and noise."""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterable, Sequence

from ..errors import CapacityError
from ..game import ActionOrdering, GameMatrix, builtin_game, enumerate_antisymmetric, is_permissible
from ..opponents import OpponentSpec
from ..predictors import Hypothesis, HypothesisSpace
from .base import Decision, Exploiter

LEX_MAX_N = 4


def lexicographic_space(games: Iterable[GameMatrix], n: int, kind: str = "mbr") -> HypothesisSpace:
    """(game, ordering) pairs, games compared row-major with -1 < 0 < 1, then orderings."""
    games = sorted(games, key=lambda g: g.payoffs)
    orderings = [ActionOrdering(p) for p in itertools.permutations(range(n))]
    spec = OpponentSpec(kind)
    return HypothesisSpace(Hypothesis(spec.with_ordering(o), g) for g in games for o in orderings)


def counterexample_space() -> HypothesisSpace:
    """The two six-action tables of the counterexample, under every ordering."""
    return lexicographic_space([builtin_game("m_star"), builtin_game("m_lex")], 6)


class LexicographicBaseline(Exploiter):
    """Trust the lexicographically first consistent model and best-respond to its forecast.

    Among the best responses the model offers, the highest-index one is
    played.  The agent is deliberately naive: it is the strategy that a
    consistent-but-wrong model can keep losing against forever.
    """

    name = "lex-baseline"

    def __init__(self, n: int, space: HypothesisSpace | None = None):
        super().__init__(n)
        if space is None:
            if n > LEX_MAX_N:
                raise CapacityError(f"lex-baseline enumerates every game only for n <= {LEX_MAX_N}")
            space = lexicographic_space(filter(is_permissible, enumerate_antisymmetric(n)), n)
        self.predictor = space
        self.anticipated: list[int] = []  # payoff the current model promised for each round

    def play(self, obs):
        space = self.predictor
        while True:
            hypothesis, model = space.first()
            predicted = model.choose()
            game = hypothesis.game
            action = max(game.beaten_by(predicted))
            self.anticipated.append(game.payoff(action, predicted))
            obs = yield Decision(action, "model", predicted)
            space.update(obs.own_actions[-1], obs.opponent_actions[-1])


class HalvingProbe(Exploiter):
    """Plays seeded random actions while declaring the halving vote as its prediction."""

    name = "halving-probe"

    def __init__(self, n: int, family: Sequence[OpponentSpec], seed: int = 0):
        super().__init__(n)
        self.family = list(family)
        self.predictor = HypothesisSpace.enumerate(self.family, n)
        self.seed = seed

    def play(self, obs):
        rng = random.Random(f"probe-{self.seed}")
        space = self.predictor
        while True:
            predicted = space.predict()
            obs = yield Decision(rng.randrange(self.n), "halving", predicted)
            space.update(obs.own_actions[-1], obs.opponent_actions[-1])


class ScriptedExploiter(Exploiter):
    """Cycles through a fixed action script."""

    name = "script"

    def __init__(self, n: int, script: Sequence[int]):
        super().__init__(n)
        if not script:
            raise ValueError("empty script")
        bad = [a for a in script if not 0 <= a < n]
        if bad:
            raise ValueError(f"script actions out of range for n={n}: {bad}")
        self.script = list(script)

    def play(self, obs):
        for a in itertools.cycle(self.script):
            obs = yield Decision(a, "script")


class RandomExploiter(Exploiter):
    name = "random"

    def __init__(self, n: int, seed: int = 0):
        super().__init__(n)
        self.seed = seed

    def play(self, obs):
        rng = random.Random(f"random-{self.seed}")
        while True:
            obs = yield Decision(rng.randrange(self.n), "random")
