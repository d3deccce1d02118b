"""Command-line front end: play, verify, demo, gen, inspect."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .arena import MatchConfig, resolve_game, run_match, transcript_to_csv, transcript_to_text
from .demos import counterexample_table, indistinguishable
from .errors import BiasBreakerError, GameInputError
from .exploiters import EXPLOITER_SPECS
from .game import MIN_ACTIONS, generate_permissible, read_document, serialize_game, validate_permissible
from .suite import default_suite, load_suite, parse_n_range, run_suite

EXIT_OK = 0
EXIT_FAILED = 1  # checks ran and something did not pass
EXIT_USAGE = 2  # bad input: spec, file, flag
EXIT_FAULT = 3  # a match aborted on a predictor or model fault


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_play(args: argparse.Namespace) -> int:
    game = resolve_game(args.game, args.seed)
    transcript = run_match(MatchConfig(game, args.opponent, args.exploiter, args.rounds, args.seed), game=game)
    transcript.game_label = args.game
    if args.format == "csv":
        _emit(transcript_to_csv(transcript), args.out)
    else:
        _emit(transcript_to_text(transcript, game), args.out)
    if transcript.fault:
        print(f"error: match aborted at round {len(transcript.records) + 1}: {transcript.fault}", file=sys.stderr)
        return EXIT_FAULT
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.suite == "default":
        suite = default_suite(args.trials if args.trials is not None else 20, args.seed if args.seed is not None else 0)
    else:
        suite = load_suite(args.suite, args.trials, args.seed)
    n_range = parse_n_range(args.n_range) if args.n_range else None
    summary = run_suite(suite, n_range=n_range, failure_dir=args.failures)
    sys.stdout.write(summary.report())
    return EXIT_OK if summary.ok else EXIT_FAILED


def cmd_demo(args: argparse.Namespace) -> int:
    if args.name == "counterexample":
        sys.stdout.write(counterexample_table(args.rounds or 6))
        return EXIT_OK
    comparison = indistinguishable(args.exploiter, args.rounds or 50, args.seed)
    width = len(str(len(comparison.ours)))
    print(f"{'round':>{width + 1}} ours  best/rps  worst/reversed")
    names = "RPS"
    for k, (a, b, c) in enumerate(zip(comparison.ours, comparison.best_responder, comparison.worst_responder), 1):
        mark = "" if b == c else "  <- differs"
        print(f"{k:>{width + 1}}    {names[a]}         {names[b]}               {names[c]}{mark}")
    if comparison.identical:
        print("identical opponent streams: from actions alone a best responder in rock-paper-scissors")
        print("cannot be told apart from a worst responder in the reversed game")
        return EXIT_OK
    print("streams differ")
    return EXIT_FAILED


def cmd_gen(args: argparse.Namespace) -> int:
    if args.n < MIN_ACTIONS:
        raise GameInputError(f"no permissible game exists for n < {MIN_ACTIONS}")
    _emit(serialize_game(generate_permissible(args.n, args.seed)), args.out)
    return EXIT_OK


def cmd_inspect(args: argparse.Namespace) -> int:
    path = Path(args.game)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise GameInputError(f"cannot read {path}: {exc.strerror}") from None
    doc = read_document(raw)
    table, n = doc["payoffs"], doc["n"]
    names = doc["actions"] or [str(i) for i in range(n)]
    width = max(2, *(len(s) for s in names))
    print(" " * width + " " + " ".join(s.rjust(width) for s in names))
    for name, row in zip(names, table):
        print(name.rjust(width) + " " + " ".join(str(v).rjust(width) for v in row))
    report = validate_permissible(table)
    print(f"validation: {report}")
    for i in range(n):
        beats = ", ".join(names[j] for j in range(n) if table[i][j] == 1) or "-"
        loses = ", ".join(names[j] for j in range(n) if table[j][i] == 1) or "-"
        print(f"{names[i]}: beats {beats}; loses to {loses}")
    return EXIT_OK if report.ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="biasbreaker", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("play", help="run one match and print its transcript")
    p.add_argument("--game", required=True, help="rps | m_star | m_lex | random:N | path to a game file")
    p.add_argument("--opponent", required=True, help="mbr, mwr, gambler, wsls:shift|stay, ftl[:r], hap, optional @perm")
    p.add_argument("--exploiter", required=True, help="; ".join(EXPLOITER_SPECS))
    p.add_argument("--rounds", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out", help="write the transcript here instead of stdout")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("verify", help="run a bound-verification suite")
    p.add_argument("--suite", default="default", help="'default' or a JSON suite file")
    p.add_argument("--trials", type=int, help="seeds per (row, n); default 20")
    p.add_argument("--seed", type=int, help="first seed; default 0")
    p.add_argument("--n-range", help="restrict to action counts A..B")
    p.add_argument("--failures", help="directory for transcripts of failing matches")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", help="counterexample or indistinguishability demonstration")
    p.add_argument("name", choices=("counterexample", "indistinguishable"))
    p.add_argument("--rounds", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exploiter", default="random", help="agent driving the indistinguishability run")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("gen", help="write a random permissible game file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (stdout if omitted)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("inspect", help="print a game file with its validation report")
    p.add_argument("--game", required=True)
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "rounds", None) is not None and args.rounds < 1:
        parser.error("--rounds must be at least 1")
    try:
        return args.func(args)
    except (BiasBreakerError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
