"""Majority-vote (halving) prediction over (strategy, game, ordering) hypotheses."""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from ..errors import CapacityError, GameInputError, ModelMismatchError
from ..game import MIN_ACTIONS, ActionOrdering, GameMatrix, enumerate_antisymmetric, is_permissible
from ..opponents import Opponent, OpponentSpec

DEFAULT_MAX_N = 3


@dataclass(frozen=True)
class Hypothesis:
    spec: OpponentSpec  # ordering set
    game: GameMatrix

    def matches(self, spec: OpponentSpec, game: GameMatrix) -> bool:
        return self.spec == spec and self.game.payoffs == game.payoffs


class HypothesisSpace:
    """Surviving hypotheses, each carrying an incremental opponent model.

    Entries keep their construction order, so ``first()`` is the earliest
    survivor in whatever order the caller enumerated them.
    """

    def __init__(self, hypotheses: Iterable[Hypothesis]):
        self.entries = list(hypotheses)
        self._models = [Opponent(h.spec, h.game) for h in self.entries]
        self.initial_size = len(self.entries)
        self.rounds = 0

    @classmethod
    def enumerate(
        cls,
        family: Sequence[OpponentSpec],
        n: int,
        max_n: int = DEFAULT_MAX_N,
        permissible_only: bool = False,
    ) -> HypothesisSpace:
        """Every (strategy, antisymmetric game, ordering) triple for ``n`` actions.

        Order: strategy as listed, then games lexicographically, then
        orderings lexicographically.
        """
        if n < MIN_ACTIONS:
            raise GameInputError(f"no permissible game exists for n < {MIN_ACTIONS} (got n={n})")
        if n > max_n:
            raise CapacityError(f"hypothesis enumeration for n={n} exceeds guard n <= {max_n}")
        games = [g for g in enumerate_antisymmetric(n) if not permissible_only or is_permissible(g)]
        orderings = [ActionOrdering(p) for p in itertools.permutations(range(n))]
        return cls(
            Hypothesis(spec.with_ordering(o), g) for spec in family for g in games for o in orderings
        )

    def __len__(self) -> int:
        return len(self.entries)

    def mistake_bound(self) -> int:
        """Most mistakes majority voting can make while a true hypothesis survives."""
        return math.ceil(math.log2(self.initial_size)) if self.initial_size > 1 else 0

    def predictions(self) -> list[int]:
        return [m.choose() for m in self._models]

    def predict(self) -> int:
        """Plurality vote over survivors; ties go to the lowest action."""
        if not self._models:
            raise ModelMismatchError("no hypothesis left: the opponent is outside the family")
        votes: dict[int, int] = {}
        for a in self.predictions():
            votes[a] = votes.get(a, 0) + 1
        top = max(votes.values())
        return min(a for a, v in votes.items() if v == top)

    def first(self) -> tuple[Hypothesis, Opponent]:
        if not self._models:
            raise ModelMismatchError("no hypothesis left: the opponent is outside the family")
        return self.entries[0], self._models[0]

    def update(self, ours: int, observed: int) -> int:
        """Drop hypotheses that mispredicted ``observed``; return how many were dropped."""
        keep_h, keep_m = [], []
        for h, m in zip(self.entries, self._models):
            if m.choose() == observed:
                m.record(ours, observed)
                keep_h.append(h)
                keep_m.append(m)
        dropped = len(self.entries) - len(keep_h)
        self.entries, self._models = keep_h, keep_m
        self.rounds += 1
        return dropped

    def contains(self, spec: OpponentSpec, game: GameMatrix) -> bool:
        return any(h.matches(spec, game) for h in self.entries)
