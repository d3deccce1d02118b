"""Two small demonstrations built on the arena.

``counterexample``: an agent that always trusts the lexicographically first
(table, ordering) model consistent with a myopic best responder's play
expects to win every round, yet never wins against the six-action game it
is really facing.

``indistinguishable``: a best responder in rock-paper-scissors and a worst
responder in reversed rock-paper-scissors produce identical action streams,
so no payoff-blind agent can tell them apart.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arena import MatchConfig, MatchTranscript, run_match
from .game import ActionOrdering, builtin_game
from .opponents import OpponentSpec, default_ordering

COUNTEREXAMPLE_ORDER = "0,1,2,3,4,5"


def counterexample_match(rounds: int = 60) -> MatchTranscript:
    return run_match(
        MatchConfig("m_star", f"mbr@{COUNTEREXAMPLE_ORDER}", "lex-baseline:counterexample", rounds, 0)
    )


def counterexample_table(rounds: int = 6) -> str:
    """The four-row round table: our action, the opponent's, anticipated and actual payoff."""
    transcript = counterexample_match(rounds)
    game = builtin_game("m_star")
    anticipated = transcript.agent.anticipated[:rounds]
    rows = [
        ("Round", [str(r.round) for r in transcript.records]),
        ("Our action", [game.name(r.our_action) for r in transcript.records]),
        ("Opponent action", [game.name(r.opp_action) for r in transcript.records]),
        ("Anticipated payoff (m_lex)", [str(v) for v in anticipated]),
        ("Actual payoff (m_star)", [str(r.payoff) for r in transcript.records]),
    ]
    width = max(len(label) for label, _ in rows)
    cell = max(len(v) for _, values in rows for v in values)
    lines = [label.ljust(width) + " | " + " ".join(v.rjust(cell) for v in values) for label, values in rows]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class StreamComparison:
    ours: list[int]
    best_responder: list[int]
    worst_responder: list[int]

    @property
    def identical(self) -> bool:
        return self.best_responder == self.worst_responder


def indistinguishable(
    exploiter: str = "random", rounds: int = 50, seed: int = 0, ordering: ActionOrdering | None = None
) -> StreamComparison:
    """Run ``exploiter`` live against both pairings and collect the opponent streams."""
    rps = builtin_game("rps")
    ordering = ordering or default_ordering(3, seed)
    best = run_match(MatchConfig(rps, OpponentSpec("mbr", ordering=ordering), exploiter, rounds, seed))
    worst = run_match(MatchConfig(rps.reversed(), OpponentSpec("mwr", ordering=ordering), exploiter, rounds, seed))
    return StreamComparison(best.our_actions(), best.opponent_actions(), worst.opponent_actions())
