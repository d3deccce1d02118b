from __future__ import annotations

import ast
import itertools
from pathlib import Path

import pytest

import biasbreaker.exploiters as exploiters_pkg
from biasbreaker.arena import MatchConfig, run_match
from biasbreaker.errors import CapacityError, SequencingError, SpecError
from biasbreaker.exploiters import (
    ActionLog,
    BeatTieShift,
    Observation,
    ScriptedExploiter,
    make_exploiter,
    multiple_schedule,
    tripling_schedule,
)
from biasbreaker.game import ActionOrdering, builtin_game, enumerate_antisymmetric, is_permissible
from biasbreaker.opponents import OpponentSpec

BLIND_MODULES = ("base", "myopic", "wsls", "repetition", "hap")


@pytest.mark.parametrize("module", BLIND_MODULES)
def test_payoff_blind_modules_never_import_the_game(module):
    path = Path(exploiters_pkg.__file__).with_name(f"{module}.py")
    tree = ast.parse(path.read_text())
    imported = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            imported.add(node.module or "")
        elif isinstance(node, ast.Import):
            imported.update(a.name for a in node.names)
    assert not {"game", "arena", "suite"} & {m.rsplit(".", 1)[-1] for m in imported}


def test_observation_exposes_only_actions():
    own, theirs = [0, 1], [2, 2]
    obs = Observation.live(3, own, theirs)
    assert {f for f in vars(obs)} == {"n", "own_actions", "opponent_actions"}
    assert not hasattr(obs.own_actions, "append")
    own.append(2)
    theirs.append(0)
    assert list(obs.own_actions) == [0, 1, 2]
    tail = obs.since(1)
    assert list(tail.opponent_actions) == [2, 0]
    assert obs.opponent_actions[-1] == 0
    with pytest.raises(IndexError):
        ActionLog([1])[1]


def test_act_checks_sequencing():
    agent = ScriptedExploiter(3, [0, 1])
    own, theirs = [], []
    obs = Observation.live(3, own, theirs)
    assert agent.act(obs).action == 0
    with pytest.raises(SequencingError):
        agent.act(obs)


def test_schedules():
    assert multiple_schedule(3, 2) == [2, 4, 12]
    assert tripling_schedule(4) == [1, 3, 9, 27]
    assert sum(tripling_schedule(4)) + 1 == (3**4 - 1) // 2 + 1


def test_generic_learning_bounds():
    assert make_exploiter("generic-br:3", 4).learning_bound == 13
    assert make_exploiter("generic-br:x2", 3).learning_bound == 2 * 3**2 + 1


@pytest.mark.parametrize(
    "spec",
    ["nope", "beat-mbr:1", "beat-ftl:0", "beat-ftl:x", "generic-br:0", "generic-br:xq", "halving-probe:", "script:a", "beat-hap:2"],
)
def test_bad_exploiter_specs(spec):
    with pytest.raises(SpecError):
        make_exploiter(spec, 3)


def test_counterexample_baseline_needs_six_actions():
    with pytest.raises(SpecError):
        make_exploiter("lex-baseline:counterexample", 3)


def test_beat_gambler_table_on_rps():
    order = ActionOrdering((0, 1, 2))
    t = run_match(MatchConfig("rps", OpponentSpec("gambler", ordering=order), "beat-gambler", 30))
    game = builtin_game("rps")
    assert {game.name(a): game.name(b) for a, b in t.agent.table.items()} == {"S": "R", "R": "P"}
    assert t.audit("table").ok


def test_agents_are_blind_to_the_table():
    """Same observed stream, different games: identical choices."""
    ordering = ActionOrdering((1, 0, 2))
    for spec in ("beat-mbr", "beat-gambler", "beat-ftl", "generic-br:2", "random"):
        best = run_match(MatchConfig(builtin_game("rps"), OpponentSpec("mbr", ordering=ordering), spec, 80))
        worst = run_match(MatchConfig(builtin_game("rps").reversed(), OpponentSpec("mwr", ordering=ordering), spec, 80))
        assert best.our_actions() == worst.our_actions()
        assert best.opponent_actions() == worst.opponent_actions()


def all_worlds(n):
    games = [g for g in enumerate_antisymmetric(n) if is_permissible(g)]
    orders = [ActionOrdering(p) for p in itertools.permutations(range(n))]
    return itertools.product(games, orders)


@pytest.mark.parametrize("n", [3, 4])
def test_wsls_auto_exhaustive_small_games(n):
    """Every permissible game, ordering and tie policy: policy known within n+1 rounds."""
    for game, order in all_worlds(n):
        for policy in ("shift", "stay"):
            spec = OpponentSpec("wsls", tie_policy=policy, ordering=order)
            t = run_match(MatchConfig(game, spec, "wsls-auto", 3 * n * n))
            agent = t.agent
            assert t.fault is None
            assert agent.tie_policy == policy
            assert agent.decided_after <= n + 1
            assert agent.probe_length <= n


def test_out_of_family_opponent_is_a_recorded_fault_or_failed_audit():
    for opponent in ("mbr", "gambler", "hap"):
        for seed in range(4):
            t = run_match(MatchConfig("random:5", opponent, "wsls-auto", 40, seed))
            assert t.fault is None or t.fault.startswith("ModelMismatchError")
            assert t.audit("tie_policy").ok is False


def test_tie_shift_learning_is_complete():
    for seed in range(5):
        t = run_match(MatchConfig("random:6", "wsls:shift", "beat-wsls-shift", 300, seed))
        assert isinstance(t.agent, BeatTieShift)
        assert len(t.agent.table) == 6
        assert t.audit("table").ok


def test_lex_baseline_default_space_is_capped():
    with pytest.raises(CapacityError):
        make_exploiter("lex-baseline", 5)


def test_lex_baseline_beats_mbr_on_rps():
    t = run_match(MatchConfig("rps", "mbr", "lex-baseline", 40, 3))
    assert all(r.payoff == 1 for r in t.records[10:])
