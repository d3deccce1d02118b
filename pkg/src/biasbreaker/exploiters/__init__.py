"""Payoff-blind exploiters and the spec-string registry."""

from __future__ import annotations

from ..errors import SpecError
from ..opponents import parse_opponent_spec
from .base import ActionLog, Decision, Exploiter, Observation
from .baseline import (
    HalvingProbe,
    LexicographicBaseline,
    RandomExploiter,
    ScriptedExploiter,
    counterexample_space,
    lexicographic_space,
)
from .hap import BeatHighestAverage
from .myopic import BeatGamblersFallacy, BeatMyopicBestResponder
from .repetition import (
    BeatFollowTheLeader,
    BeatLimitedFollowTheLeader,
    GenericBestResponseLearner,
    RepetitionLearner,
    constant_schedule,
    multiple_schedule,
    tripling_schedule,
)
from .wsls import BeatTieShift, BeatTieStay, WSLSAuto

EXPLOITER_SPECS = (
    "beat-mbr",
    "beat-gambler",
    "beat-wsls-shift",
    "beat-wsls-stay",
    "beat-ftl",
    "beat-ftl:<r>",
    "beat-hap",
    "lex-baseline[:counterexample]",
    "generic-br:<c> | generic-br:x<b>",
    "wsls-auto",
    "halving-probe:<kind>[+<kind>...]",
    "script:<a>,<a>,...",
    "random",
)


def _positive(text: str, what: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise SpecError(f"{what} must be an integer, got {text!r}") from None
    if value < 1:
        raise SpecError(f"{what} must be positive, got {value}")
    return value


def make_exploiter(spec: str, n: int, rounds: int = 1000, seed: int = 0) -> Exploiter:
    """Build an exploiter from its spec string.

    ``rounds`` sizes the ellipsoid margin of the predicting agents and
    ``seed`` drives the agents that play randomly.
    """
    name, _, arg = spec.strip().partition(":")
    simple = {
        "beat-mbr": BeatMyopicBestResponder,
        "beat-gambler": BeatGamblersFallacy,
        "beat-wsls-shift": BeatTieShift,
        "beat-wsls-stay": BeatTieStay,
        "wsls-auto": WSLSAuto,
    }
    if name in simple:
        if arg:
            raise SpecError(f"exploiter {name!r} takes no argument")
        return simple[name](n)
    if name == "beat-ftl":
        if arg:
            return BeatLimitedFollowTheLeader(n, _positive(arg, "window"), horizon=rounds)
        return BeatFollowTheLeader(n, horizon=rounds)
    if name == "beat-hap":
        if arg:
            raise SpecError("beat-hap takes no argument")
        return BeatHighestAverage(n, horizon=rounds)
    if name == "lex-baseline":
        if arg == "counterexample":
            if n != 6:
                raise SpecError("lex-baseline:counterexample needs the six-action games")
            return LexicographicBaseline(n, counterexample_space())
        if arg:
            raise SpecError(f"unknown lex-baseline variant {arg!r}")
        return LexicographicBaseline(n)
    if name == "generic-br":
        if arg.startswith("x"):
            return GenericBestResponseLearner(n, b=_positive(arg[1:], "multiple"))
        return GenericBestResponseLearner(n, c=_positive(arg, "repetition count"))
    if name == "halving-probe":
        if not arg:
            raise SpecError("halving-probe needs a family, e.g. halving-probe:mbr+gambler")
        family = [parse_opponent_spec(k) for k in arg.split("+")]
        return HalvingProbe(n, family, seed=seed)
    if name == "script":
        try:
            script = [int(a) for a in arg.split(",")]
        except ValueError:
            raise SpecError(f"bad script {arg!r}") from None
        try:
            return ScriptedExploiter(n, script)
        except ValueError as exc:
            raise SpecError(str(exc)) from None
    if name == "random":
        return RandomExploiter(n, seed=seed)
    raise SpecError(f"unknown exploiter {spec!r}; expected one of: {', '.join(EXPLOITER_SPECS)}")


__all__ = [
    "ActionLog",
    "BeatFollowTheLeader",
    "BeatGamblersFallacy",
    "BeatHighestAverage",
    "BeatLimitedFollowTheLeader",
    "BeatMyopicBestResponder",
    "BeatTieShift",
    "BeatTieStay",
    "Decision",
    "EXPLOITER_SPECS",
    "Exploiter",
    "GenericBestResponseLearner",
    "HalvingProbe",
    "LexicographicBaseline",
    "Observation",
    "RandomExploiter",
    "RepetitionLearner",
    "ScriptedExploiter",
    "WSLSAuto",
    "constant_schedule",
    "counterexample_space",
    "lexicographic_space",
    "make_exploiter",
    "multiple_schedule",
    "tripling_schedule",
]
