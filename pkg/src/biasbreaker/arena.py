"""Match runner, transcripts and post-hoc ground-truth audits.

The arena is the only place where the true table, the opponent and the
exploiter meet.  Exploiters receive :class:`Observation` views over the two
action lists and nothing else.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConditioningError, GameInputError, ModelMismatchError, SpecError
from .exploiters import BeatHighestAverage, Exploiter, Observation, WSLSAuto, make_exploiter
from .game import ActionOrdering, GameMatrix, builtin_game, generate_permissible, parse_game
from .opponents import Opponent, OpponentSpec, default_ordering, parse_opponent_spec
from .predictors import EllipsoidPredictor, HypothesisSpace

CSV_COLUMNS = ("round", "our_action", "opp_action", "payoff", "phase", "predicted", "correct")


def resolve_game(source: str | GameMatrix, seed: int = 0, allow_nonpermissible: bool = False) -> GameMatrix:
    """``rps`` / ``m_star`` / ``m_lex``, ``random:N`` or a path to a game file."""
    if isinstance(source, GameMatrix):
        return source
    if source.startswith("random:"):
        try:
            n = int(source.split(":", 1)[1])
        except ValueError:
            raise GameInputError(f"bad random game size in {source!r}") from None
        return generate_permissible(n, seed)
    try:
        return builtin_game(source)
    except GameInputError:
        pass
    path = Path(source)
    if not path.is_file():
        raise GameInputError(f"no builtin game or file named {source!r}")
    return parse_game(path.read_bytes(), allow_nonpermissible=allow_nonpermissible)


@dataclass(frozen=True)
class MatchConfig:
    game: str | GameMatrix
    opponent: str | OpponentSpec
    exploiter: str
    rounds: int = 1000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.rounds < 1:
            raise ValueError("rounds must be at least 1")


@dataclass(frozen=True)
class RoundRecord:
    round: int
    our_action: int
    opp_action: int
    payoff: int
    phase: str
    predicted: int | None = None
    correct: bool | None = None


@dataclass(frozen=True)
class AuditResult:
    name: str
    ok: bool | None  # None: not applicable to this match
    detail: str = ""

    def __str__(self) -> str:
        status = {True: "pass", False: "FAIL", None: "n/a"}[self.ok]
        return f"{self.name}: {status}" + (f" ({self.detail})" if self.detail else "")


@dataclass
class MatchTranscript:
    n: int
    records: list[RoundRecord]
    game_label: str = ""
    opponent: str = ""
    exploiter: str = ""
    seed: int = 0
    planned_rounds: int = 0
    learning_rounds: int | None = None
    fault: str | None = None
    params: dict[str, int] = field(default_factory=dict)
    audits: list[AuditResult] = field(default_factory=list)
    agent: Exploiter | None = field(default=None, repr=False, compare=False)

    @property
    def wins(self) -> int:
        return sum(r.payoff == 1 for r in self.records)

    @property
    def ties(self) -> int:
        return sum(r.payoff == 0 for r in self.records)

    @property
    def losses(self) -> int:
        return sum(r.payoff == -1 for r in self.records)

    @property
    def nonwins(self) -> list[int]:
        return [r.round for r in self.records if r.payoff != 1]

    @property
    def complete(self) -> bool:
        return self.fault is None and len(self.records) == self.planned_rounds

    def our_actions(self) -> list[int]:
        return [r.our_action for r in self.records]

    def opponent_actions(self) -> list[int]:
        return [r.opp_action for r in self.records]

    def audit(self, name: str) -> AuditResult | None:
        return next((a for a in self.audits if a.name == name), None)

    def summary(self) -> str:
        line = (
            f"rounds={len(self.records)} wins={self.wins} ties={self.ties} losses={self.losses}"
        )
        if self.fault:
            line += f" fault={self.fault!r}"
        return line


def run_match(config: MatchConfig, game: GameMatrix | None = None) -> MatchTranscript:
    """Play one match; a predictor or model fault ends it early with the fault recorded."""
    game = game if game is not None else resolve_game(config.game, config.seed)
    spec = config.opponent if isinstance(config.opponent, OpponentSpec) else parse_opponent_spec(config.opponent)
    if spec.ordering is None:
        spec = spec.with_ordering(default_ordering(game.n, config.seed))
    if spec.ordering.n != game.n:
        raise SpecError(f"ordering {spec.ordering} does not fit a game with {game.n} actions")
    agent = make_exploiter(config.exploiter, game.n, rounds=config.rounds, seed=config.seed)
    opponent = Opponent(spec, game)
    transcript = MatchTranscript(
        n=game.n,
        records=[],
        game_label=config.game if isinstance(config.game, str) else "custom",
        opponent=str(spec),
        exploiter=config.exploiter,
        seed=config.seed,
        planned_rounds=config.rounds,
        agent=agent,
    )
    if spec.window is not None:
        transcript.params["r"] = spec.window
    space = agent.predictor if isinstance(agent.predictor, HypothesisSpace) else None
    tracked = space is not None and space.contains(spec, game)
    survival: list[bool] = []

    own: list[int] = []
    theirs: list[int] = []
    obs = Observation.live(game.n, own, theirs)
    try:
        for t in range(1, config.rounds + 1):
            decision = agent.act(obs)
            if tracked:
                survival.append(space.contains(spec, game))
            a = decision.action
            b = opponent.choose()
            own.append(a)
            theirs.append(b)
            opponent.record(a, b)
            predicted = decision.predicted
            transcript.records.append(
                RoundRecord(
                    t, a, b, game.payoff(a, b), decision.phase, predicted, None if predicted is None else predicted == b
                )
            )
        agent.finish(obs)
        if tracked:
            survival.append(space.contains(spec, game))
    except (ConditioningError, ModelMismatchError) as exc:
        transcript.fault = f"{type(exc).__name__}: {exc}"
    transcript.learning_rounds = getattr(agent, "learning_rounds", None)
    if isinstance(agent, WSLSAuto) and agent.probe_length is not None:
        transcript.params["probe"] = agent.probe_length
    if space is not None:
        transcript.params["H"] = space.initial_size
    for attr in ("c", "b"):
        value = getattr(agent, attr, None)
        if isinstance(value, int):
            transcript.params[attr] = value
    transcript.audits = audit_ground_truth(transcript, game, spec, agent, survival if tracked else None)
    return transcript


# --- audits ----------------------------------------------------------------------


def ghost_point(game: GameMatrix, ordering: ActionOrdering, mode: str, span: int) -> np.ndarray:
    """True table with earlier-ranked actions nudged up, breaking every ordering tie strictly."""
    scale = span if mode == "net" else span * span
    m = np.array(game.payoffs, dtype=float)
    bonus = np.array([1.0 / ((ordering.rank(i) + 1) * scale) for i in range(game.n)])
    return m + bonus[:, None]


def audit_table(table: dict[int, int], game: GameMatrix) -> AuditResult:
    if not table:
        return AuditResult("table", None, "no best-response table")
    bad = [f"{a}->{b}" for a, b in sorted(table.items()) if game.payoff(b, a) != 1]
    if bad:
        return AuditResult("table", False, "entries that do not win: " + ", ".join(bad))
    return AuditResult("table", True, ", ".join(f"{game.name(a)}->{game.name(b)}" for a, b in sorted(table.items())))


def audit_feasibility(predictor: EllipsoidPredictor, game: GameMatrix, ordering: ActionOrdering, span: int) -> AuditResult:
    ghost = ghost_point(game, ordering, predictor.mode, span)
    for k, c in enumerate(predictor.constraints, 1):
        if not c.satisfied_by(ghost):
            return AuditResult("feasibility", False, f"constraint {k} (predicted {c.predicted}, actual {c.actual}) slack {c.slack(ghost):.3e}")
    return AuditResult("feasibility", True, f"{len(predictor.constraints)} constraints")


def audit_volume(predictor: EllipsoidPredictor) -> AuditResult:
    bound = predictor.ellipsoid.volume_ratio_bound(predictor.ellipsoid.dim)
    for k, ratio in enumerate(predictor.volume_ratios, 1):
        if not (ratio < 1.0 and ratio <= bound * (1 + 1e-9)):
            return AuditResult("volume", False, f"cut {k}: ratio {ratio:.6f} > {bound:.6f}")
    return AuditResult("volume", True, f"{len(predictor.volume_ratios)} cuts, bound {bound:.6f}")


def run_values(actions: list[int]) -> list[int]:
    """Actions with consecutive repeats collapsed."""
    return [a for k, a in enumerate(actions) if k == 0 or actions[k - 1] != a]


def audit_ground_truth(
    transcript: MatchTranscript,
    game: GameMatrix,
    spec: OpponentSpec,
    agent: Exploiter | None = None,
    survival: list[bool] | None = None,
) -> list[AuditResult]:
    """Check the exploiter's learned artifacts against the truth it never saw."""
    audits = [audit_zero_sum(transcript, game)]
    if agent is None:
        return audits
    audits.append(audit_table(agent.table, game))
    predictor = agent.predictor
    if isinstance(predictor, EllipsoidPredictor):
        span = predictor.window if predictor.window is not None else transcript.planned_rounds
        audits.append(audit_feasibility(predictor, game, spec.ordering, span))
        audits.append(audit_volume(predictor))
    if isinstance(predictor, HypothesisSpace):
        if survival is None:
            audits.append(AuditResult("truth", None, "true opponent outside the hypothesis family"))
        elif all(survival):
            audits.append(AuditResult("truth", True, f"survived {len(survival)} checks, {len(predictor)} left"))
        else:
            audits.append(AuditResult("truth", False, f"eliminated before round {survival.index(False) + 1}"))
    if isinstance(agent, BeatHighestAverage) and agent.learning_rounds is not None:
        head = run_values(transcript.opponent_actions()[: agent.learning_rounds])[: game.n]
        ok = head == list(spec.ordering.order)
        audits.append(AuditResult("switch_order", ok, f"observed {head}, ordering {list(spec.ordering.order)}"))
    if isinstance(agent, WSLSAuto) and agent.tie_policy is not None:
        ok = spec.kind == "wsls" and agent.tie_policy == spec.tie_policy
        audits.append(
            AuditResult(
                "tie_policy",
                ok,
                f"detected {agent.tie_policy}, probe {agent.probe_length} rounds, known after {agent.decided_after}",
            )
        )
    return audits


def audit_zero_sum(transcript: MatchTranscript, game: GameMatrix) -> AuditResult:
    for r in transcript.records:
        ours, theirs = game.payoff(r.our_action, r.opp_action), game.payoff(r.opp_action, r.our_action)
        if ours + theirs != 0 or ours != r.payoff:
            return AuditResult("zero_sum", False, f"round {r.round}")
    return AuditResult("zero_sum", True)


def replay_opponent(our_actions: list[int], game: GameMatrix, spec: OpponentSpec) -> list[int]:
    """Opponent actions produced by feeding it a fixed sequence of our actions."""
    opponent = Opponent(spec, game)
    out = []
    for a in our_actions:
        b = opponent.choose()
        opponent.record(a, b)
        out.append(b)
    return out


# --- output ----------------------------------------------------------------------


def _cell(value: int | bool | None) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    return str(value)


def transcript_to_csv(transcript: MatchTranscript) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in transcript.records:
        writer.writerow(
            [r.round, r.our_action, r.opp_action, r.payoff, r.phase, _cell(r.predicted), _cell(r.correct)]
        )
    return buf.getvalue()


def records_from_csv(text: str) -> list[RoundRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_COLUMNS:
        raise ValueError(f"transcript CSV header must be {','.join(CSV_COLUMNS)}")
    records = []
    for row in reader:
        rnd, ours, opp, pay, phase, pred, corr = row
        records.append(
            RoundRecord(
                int(rnd),
                int(ours),
                int(opp),
                int(pay),
                phase,
                int(pred) if pred else None,
                None if corr == "" else corr == "1",
            )
        )
    return records


def transcript_to_text(transcript: MatchTranscript, game: GameMatrix | None = None) -> str:
    name = game.name if game is not None else str
    lines = [
        f"game: {transcript.game_label} (n={transcript.n})",
        f"opponent: {transcript.opponent}",
        f"exploiter: {transcript.exploiter}",
        f"seed: {transcript.seed}",
    ]
    for r in transcript.records:
        line = f"round {r.round}: ours={name(r.our_action)} theirs={name(r.opp_action)} payoff={r.payoff:+d} phase={r.phase}"
        if r.predicted is not None:
            line += f" predicted={name(r.predicted)} {'hit' if r.correct else 'miss'}"
        lines.append(line)
    lines.append(transcript.summary())
    if transcript.learning_rounds is not None:
        lines.append(f"learning rounds: {transcript.learning_rounds}")
    agent = transcript.agent
    if agent is not None and isinstance(agent.predictor, EllipsoidPredictor):
        p = agent.predictor
        lines.append(f"ellipsoid: mistakes={p.mistakes} log_volume={p.ellipsoid.log_volume():.4f}")
        lines.append("center: " + " ".join(f"{x:+.3f}" for x in p.ellipsoid.center))
    for a in transcript.audits:
        lines.append(f"audit {a}")
    return "\n".join(lines) + "\n"


def ceil_log2(x: int) -> int:
    return math.ceil(math.log2(x)) if x > 1 else 0
