from __future__ import annotations

import dataclasses
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from biasbreaker.arena import (
    AuditResult,
    MatchConfig,
    audit_table,
    audit_zero_sum,
    records_from_csv,
    replay_opponent,
    resolve_game,
    run_match,
    run_values,
    transcript_to_csv,
    transcript_to_text,
)
from biasbreaker.bounds import BoundSpec, evaluate, verify_bound
from biasbreaker.errors import GameInputError, SpecError
from biasbreaker.game import ActionOrdering, builtin_game, generate_permissible
from biasbreaker.opponents import OpponentSpec, parse_opponent_spec
from biasbreaker.suite import Suite, SuiteRow, load_suite, parse_n_range, run_suite, worker_count

PAIRS = [
    ("mbr", "beat-mbr"),
    ("gambler", "beat-gambler"),
    ("wsls:shift", "beat-wsls-shift"),
    ("wsls:stay", "beat-wsls-stay"),
    ("ftl:2", "beat-ftl:2"),
    ("hap", "random"),
    ("mwr", "script:0,1,2"),
]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(PAIRS), st.integers(3, 6), st.integers(0, 10**4))
def test_transcript_matches_oracle_replay(pair, n, seed):
    opponent, exploiter = pair
    t = run_match(MatchConfig(f"random:{n}", opponent, exploiter, 60, seed))
    game = generate_permissible(n, seed)
    spec = parse_opponent_spec(t.opponent)
    table = [list(r) for r in game.payoffs]
    expected = oracles.opponent_stream(
        spec.kind, table, list(spec.ordering.order), t.our_actions(), tie_policy=spec.tie_policy, window=spec.window
    )
    assert t.opponent_actions() == expected
    assert replay_opponent(t.our_actions(), game, spec) == expected
    assert all(r.payoff == table[r.our_action][r.opp_action] for r in t.records)
    assert t.audit("zero_sum").ok


@pytest.mark.parametrize("opponent, exploiter", PAIRS)
def test_runs_are_deterministic(opponent, exploiter):
    a = run_match(MatchConfig("random:5", opponent, exploiter, 120, 11))
    b = run_match(MatchConfig("random:5", opponent, exploiter, 120, 11))
    assert a == b
    assert transcript_to_csv(a) == transcript_to_csv(b)


def test_csv_round_trip():
    t = run_match(MatchConfig("random:4", "ftl", "beat-ftl", 100, 2))
    text = transcript_to_csv(t)
    assert text.splitlines()[0] == "round,our_action,opp_action,payoff,phase,predicted,correct"
    assert records_from_csv(text) == t.records
    with pytest.raises(ValueError):
        records_from_csv("a,b\n")


def test_text_output_mentions_audits():
    game = builtin_game("rps")
    t = run_match(MatchConfig(game, "ftl", "beat-ftl", 40, 0))
    text = transcript_to_text(t, game)
    assert "audit feasibility: pass" in text
    assert "round 1: ours=R" in text


def test_resolve_game_sources(tmp_path):
    assert resolve_game("rps").n == 3
    assert resolve_game("random:7", 3) == generate_permissible(7, 3)
    path = tmp_path / "zero.json"
    path.write_text(json.dumps({"version": 1, "n": 3, "payoffs": [[0] * 3] * 3}))
    with pytest.raises(GameInputError):
        resolve_game(str(path))
    assert resolve_game(str(path), allow_nonpermissible=True).n == 3
    for bad in ("random:x", "missing.json"):
        with pytest.raises(GameInputError):
            resolve_game(bad)


def test_mismatched_ordering_is_rejected():
    with pytest.raises(SpecError):
        run_match(MatchConfig("rps", "mbr@0,1,2,3", "beat-mbr", 10))
    with pytest.raises(ValueError):
        MatchConfig("rps", "mbr", "beat-mbr", 0)


def test_fault_keeps_partial_transcript():
    # a halving probe over {mbr} cannot model win-stay lose-shift; the space empties
    t = run_match(MatchConfig("rps", "wsls:shift", "halving-probe:mbr", 200, 1))
    assert t.fault is not None and t.fault.startswith("ModelMismatchError")
    assert 0 < len(t.records) < 200
    assert not t.complete
    assert t.audit("truth").ok is None


def test_table_audit_names_sabotaged_entry():
    game = builtin_game("rps")
    assert audit_table({0: 1, 2: 0}, game).ok
    bad = audit_table({0: 1, 2: 1}, game)
    assert bad.ok is False and "2->1" in bad.detail
    assert audit_table({}, game).ok is None
    assert str(AuditResult("table", None)) == "table: n/a"


def test_zero_sum_audit_catches_flipped_payoff():
    game = builtin_game("rps")
    t = run_match(MatchConfig(game, "mbr", "beat-mbr", 20, 0))
    assert audit_zero_sum(t, game).ok
    t.records[5] = dataclasses.replace(t.records[5], payoff=-t.records[5].payoff or 1)
    assert audit_zero_sum(t, game).detail == "round 6"


def test_run_values():
    assert run_values([1, 1, 2, 2, 0, 1]) == [1, 2, 0, 1]


def test_bound_expressions():
    assert evaluate("2*n**2-2*n+1", {"n": 4}) == 25
    assert evaluate("clog2(H)", {"H": 162}) == 8
    assert evaluate("max(n, -r)", {"n": 3, "r": 5}) == 3
    for bad in ("__import__('os')", "n.real", "n if n else 1", "x+1", "1/2", "max(n, key=1)"):
        with pytest.raises(ValueError):
            evaluate(bad, {"n": 3})
    with pytest.raises(ValueError):
        BoundSpec.parse("sometimes(n)")
    with pytest.raises(ValueError):
        BoundSpec.parse("total_nonwins_le(n")
    assert str(BoundSpec.parse("phase_coupled")) == "phase_coupled"


def test_bound_passes_then_fails_on_sabotage():
    t = run_match(MatchConfig("random:5", "wsls:shift", "beat-wsls-shift", 1000, 4))
    bound = BoundSpec.parse("total_nonwins_le(2*n**2-2*n+1)")
    assert verify_bound(t, bound).ok
    suffix = BoundSpec.parse("suffix_all_wins(R//2)")
    assert verify_bound(t, suffix).ok
    t.records[700] = dataclasses.replace(t.records[700], payoff=0)
    report = verify_bound(t, suffix)
    assert not report.ok and report.first_violation == 701
    assert "at round 701" in str(report)


def test_phase_bounds_need_a_learning_phase():
    t = run_match(MatchConfig("rps", "mbr", "random", 30, 0))
    assert not verify_bound(t, BoundSpec.parse("phase_length(4)")).ok


def test_mistake_bound_and_truth_survival():
    t = run_match(MatchConfig("random:3", "gambler", "halving-probe:mbr+gambler", 500, 5))
    assert t.params["H"] == 324
    assert verify_bound(t, BoundSpec.parse("mistakes_le(clog2(H))")).ok
    assert t.audit("truth").ok


def test_suite_runs_and_reports(tmp_path):
    rows = (
        SuiteRow("mbr", "mbr", "beat-mbr", ns=(3, 4), rounds=50, bounds=("suffix_all_wins(n+2)",)),
        SuiteRow("broken", "mbr", "random", ns=(3,), rounds=50, bounds=("suffix_all_wins(1)",)),
    )
    summary = run_suite(Suite(rows, trials=2), workers=1, failure_dir=tmp_path)
    assert summary.matches == 6
    assert not summary.ok
    assert summary.rows[0].ok and not summary.rows[1].ok
    assert "FAIL broken: 0/2 matches" in summary.report()
    assert sorted(p.name for p in tmp_path.iterdir()) == ["broken_n3_s0.csv", "broken_n3_s1.csv"]
    restricted = run_suite(Suite(rows, trials=1), n_range=(4, 4), workers=1)
    assert [r.row.label for r in restricted.rows] == ["mbr"]


def test_duplicate_suite_labels_rejected():
    row = SuiteRow("same", "mbr", "beat-mbr", ns=(3,), rounds=5)
    with pytest.raises(ValueError, match="unique"):
        run_suite(Suite((row, row), trials=1), workers=1)


def test_parallel_suite_keeps_order():
    rows = tuple(SuiteRow(f"r{k}", "mbr", "beat-mbr", ns=(3, 5), rounds=30) for k in range(3))
    a = run_suite(Suite(rows, trials=3), workers=1)
    b = run_suite(Suite(rows, trials=3), workers=2)
    assert a.report() == b.report()
    assert [o.seed for o in b.rows[0].outcomes] == [0, 1, 2, 0, 1, 2]


def test_suite_file_loading(tmp_path):
    path = tmp_path / "suite.json"
    path.write_text(json.dumps({"trials": 3, "rows": [{"label": "x", "opponent": "mbr", "exploiter": "beat-mbr", "n": [3]}]}))
    suite = load_suite(path)
    assert suite.trials == 3 and suite.rows[0].ns == (3,)
    path.write_text(json.dumps({"rows": [{"label": "x", "opponent": "mbr"}]}))
    with pytest.raises(ValueError, match="missing"):
        load_suite(path)
    path.write_text(json.dumps({"rows": [{"label": "x", "opponent": "mbr", "exploiter": "e", "colour": 1}]}))
    with pytest.raises(ValueError, match="unknown"):
        load_suite(path)
    with pytest.raises(FileNotFoundError):
        load_suite(tmp_path / "nope.json")


def test_bad_spec_in_suite_row_fails_that_match():
    summary = run_suite(Suite((SuiteRow("bad", "robot", "beat-mbr", ns=(3,), rounds=5),), trials=1), workers=1)
    assert not summary.ok
    assert "SpecError" in summary.rows[0].outcomes[0].failures[0]


def test_n_range_and_workers(monkeypatch):
    assert parse_n_range("3..5") == (3, 5)
    assert parse_n_range("4") == (4, 4)
    for bad in ("5..3", "a..b"):
        with pytest.raises(ValueError):
            parse_n_range(bad)
    monkeypatch.setenv("BIASBREAKER_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("BIASBREAKER_THREADS", "many")
    with pytest.raises(ValueError):
        worker_count()


def test_explicit_opponent_spec_object():
    spec = OpponentSpec("mbr", ordering=ActionOrdering((2, 1, 0)))
    t = run_match(MatchConfig("rps", spec, "beat-mbr", 10))
    assert t.opponent == "mbr@2,1,0"
    assert t.opponent_actions()[0] == 2
