"""Payoff-blind agent interface.

An exploiter sees an :class:`Observation` and nothing else: the number of
actions and the two action sequences played so far.  No game table and no
payoff ever crosses this boundary.

Agents are written as generators: ``play`` yields a :class:`Decision` for
each round and receives the refreshed observation back from ``yield``.
"""

from __future__ import annotations

from collections.abc import Generator, Sequence
from dataclasses import dataclass
from typing import overload

from ..errors import SequencingError


class ActionLog(Sequence):
    """Read-only window onto a growing list of actions."""

    __slots__ = ("_data", "_start", "_stop")

    def __init__(self, data: list[int], start: int = 0, stop: int | None = None):
        self._data = data
        self._start = start
        self._stop = stop

    def __len__(self) -> int:
        end = len(self._data) if self._stop is None else min(self._stop, len(self._data))
        return max(0, end - self._start)

    @overload
    def __getitem__(self, i: int) -> int: ...
    @overload
    def __getitem__(self, i: slice) -> tuple[int, ...]: ...

    def __getitem__(self, i):
        size = len(self)
        if isinstance(i, slice):
            return tuple(self._data[self._start + k] for k in range(*i.indices(size)))
        if i < 0:
            i += size
        if not 0 <= i < size:
            raise IndexError("action log index out of range")
        return self._data[self._start + i]

    def __repr__(self) -> str:
        return f"ActionLog({list(self)})"


@dataclass(frozen=True)
class Observation:
    """Everything an exploiter may read."""

    n: int
    own_actions: Sequence[int]
    opponent_actions: Sequence[int]

    @classmethod
    def live(cls, n: int, own: list[int], theirs: list[int]) -> Observation:
        return cls(n, ActionLog(own), ActionLog(theirs))

    def since(self, start: int, stop: int | None = None) -> Observation:
        """View of rounds ``start..stop`` (0-based); a live view keeps growing when ``stop`` is None."""
        own, theirs = self.own_actions, self.opponent_actions
        if isinstance(own, ActionLog) and isinstance(theirs, ActionLog):
            base = own._start
            end = None if stop is None else base + stop
            return Observation(
                self.n, ActionLog(own._data, base + start, end), ActionLog(theirs._data, base + start, end)
            )
        return Observation(self.n, tuple(own[start:stop]), tuple(theirs[start:stop]))


@dataclass(frozen=True)
class Decision:
    """An action plus the bookkeeping the arena records with it."""

    action: int
    phase: str
    predicted: int | None = None


class Exploiter:
    """Base class: drives the ``play`` generator one round per ``act`` call."""

    name = "exploiter"

    def __init__(self, n: int):
        self.n = n
        self.table: dict[int, int] = {}  # learned best responses: action -> response
        self.predictor = None
        self._gen: Generator[Decision, Observation, None] | None = None
        self._turns = 0

    def act(self, obs: Observation) -> Decision:
        if len(obs.own_actions) != self._turns or len(obs.opponent_actions) != self._turns:
            raise SequencingError(
                f"{self.name}: observation has {len(obs.own_actions)}/{len(obs.opponent_actions)} rounds, "
                f"expected {self._turns}"
            )
        if self._gen is None:
            self._gen = self.play(obs)
            decision = next(self._gen)
        else:
            decision = self._gen.send(obs)
        if not 0 <= decision.action < self.n:
            raise SequencingError(f"{self.name} chose out-of-range action {decision.action}")
        self._turns += 1
        return decision

    def finish(self, obs: Observation) -> None:
        """Let the agent digest the final round (its next decision is discarded)."""
        if self._gen is None:
            return
        if len(obs.own_actions) != self._turns:
            raise SequencingError(f"{self.name}: finish() with {len(obs.own_actions)} rounds, expected {self._turns}")
        try:
            self._gen.send(obs)
        except StopIteration:
            pass
        self._gen.close()

    def play(self, obs: Observation) -> Generator[Decision, Observation, None]:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{self.name} n={self.n}>"
