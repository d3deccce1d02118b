"""Payoff-blind exploitation of biased opponents in repeated symmetric zero-sum games."""

from .arena import MatchConfig, MatchTranscript, run_match
from .game import ActionOrdering, GameMatrix, builtin_game, generate_permissible, validate_permissible
from .opponents import Opponent, OpponentSpec, parse_opponent_spec

__version__ = "0.1.0"

__all__ = [
    "ActionOrdering",
    "GameMatrix",
    "MatchConfig",
    "MatchTranscript",
    "Opponent",
    "OpponentSpec",
    "builtin_game",
    "generate_permissible",
    "parse_opponent_spec",
    "run_match",
    "validate_permissible",
]
