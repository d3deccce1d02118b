"""Bound-verification suites: many matches, each checked against its row's bounds and audits."""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .arena import MatchConfig, run_match, transcript_to_csv
from .bounds import BoundSpec, verify_bound

THREADS_ENV = "BIASBREAKER_THREADS"
FINAL_HALF = "suffix_all_wins(R//2+1)"


@dataclass(frozen=True)
class SuiteRow:
    label: str
    opponent: str
    exploiter: str
    ns: tuple[int, ...] = (3, 4, 5, 6, 7, 8)
    rounds: int = 1000
    bounds: tuple[str, ...] = ()
    audits: tuple[str, ...] = ("zero_sum",)  # must come out as a pass, not n/a
    game: str | None = None  # fixed game instead of random:<n>

    def __post_init__(self) -> None:
        for b in self.bounds:
            BoundSpec.parse(b)

    @classmethod
    def from_dict(cls, data: dict) -> SuiteRow:
        known = {"label", "opponent", "exploiter", "n", "rounds", "bounds", "audits", "game"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown suite row fields: {sorted(extra)}")
        missing = {"label", "opponent", "exploiter"} - set(data)
        if missing:
            raise ValueError(f"suite row missing fields: {sorted(missing)}")
        kwargs = {k: data[k] for k in ("label", "opponent", "exploiter", "rounds", "game") if k in data}
        if "n" in data:
            kwargs["ns"] = tuple(int(v) for v in data["n"])
        for key in ("bounds", "audits"):
            if key in data:
                kwargs[key] = tuple(data[key])
        return cls(**kwargs)


@dataclass(frozen=True)
class Suite:
    rows: tuple[SuiteRow, ...]
    trials: int = 20
    seed: int = 0


@dataclass(frozen=True)
class MatchOutcome:
    label: str
    n: int
    seed: int
    ok: bool
    failures: tuple[str, ...] = ()
    csv: str | None = None  # transcript of a failing match


@dataclass
class RowSummary:
    row: SuiteRow
    outcomes: list[MatchOutcome] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(o.ok for o in self.outcomes)

    @property
    def failed(self) -> int:
        return len(self.outcomes) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0


@dataclass
class SuiteSummary:
    rows: list[RowSummary]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def matches(self) -> int:
        return sum(len(r.outcomes) for r in self.rows)

    def report(self) -> str:
        lines = []
        for r in self.rows:
            status = "pass" if r.ok else "FAIL"
            lines.append(f"{status} {r.row.label}: {r.passed}/{len(r.outcomes)} matches")
            for o in r.outcomes:
                if not o.ok:
                    lines.append(f"    n={o.n} seed={o.seed}: " + "; ".join(o.failures))
        total_fail = sum(r.failed for r in self.rows)
        lines.append(f"{'pass' if self.ok else 'FAIL'}: {self.matches - total_fail}/{self.matches} matches")
        return "\n".join(lines) + "\n"


def default_suite(trials: int = 20, seed: int = 0) -> Suite:
    """Every guarantee check that runs on random games."""
    rows = [
        SuiteRow("mbr/beat-mbr", "mbr", "beat-mbr", bounds=("suffix_all_wins(n+2)",), audits=("zero_sum", "table")),
        SuiteRow("gambler/beat-gambler", "gambler", "beat-gambler", bounds=("suffix_all_wins(3*n)",), audits=("zero_sum", "table")),
        SuiteRow(
            "wsls:shift/beat-wsls-shift", "wsls:shift", "beat-wsls-shift",
            bounds=("total_nonwins_le(2*n**2-2*n+1)",), audits=("zero_sum", "table"),
        ),
        SuiteRow(
            "wsls:stay/beat-wsls-stay", "wsls:stay", "beat-wsls-stay",
            bounds=("total_nonwins_le(n**2-n+2)",), audits=("zero_sum", "table"),
        ),
        SuiteRow(
            "ftl/beat-ftl", "ftl", "beat-ftl", ns=(3, 4, 5), rounds=3000,
            bounds=("phase_length((3**n-1)//2+1)", "phase_coupled", FINAL_HALF),
            audits=("zero_sum", "table", "feasibility", "volume"),
        ),
    ]
    for r in (1, 3, 5):
        rows.append(
            SuiteRow(
                f"ftl:{r}/beat-ftl:{r}", f"ftl:{r}", f"beat-ftl:{r}", ns=(3, 4, 5), rounds=3000,
                bounds=("phase_length(n*r+1)", "phase_coupled", FINAL_HALF),
                audits=("zero_sum", "table", "feasibility", "volume"),
            )
        )
    rows.append(
        SuiteRow(
            "hap/beat-hap", "hap", "beat-hap", ns=(3, 4), rounds=3000,
            bounds=("phase_nonwins_le(n*2**n-2**n-n+1+4**(n-1))", "phase_coupled", FINAL_HALF),
            audits=("zero_sum", "table", "switch_order", "feasibility", "volume"),
        )
    )
    for family in ("mbr", "gambler", "mbr+gambler"):
        for kind in family.split("+"):
            rows.append(
                SuiteRow(
                    f"{kind}/halving-probe:{family}", kind, f"halving-probe:{family}", ns=(3,), rounds=500,
                    bounds=("mistakes_le(clog2(H))",), audits=("zero_sum", "truth"),
                )
            )
    for r in (1, 3, 5):
        rows.append(
            SuiteRow(
                f"ftl:{r}/generic-br:{r}", f"ftl:{r}", f"generic-br:{r}",
                bounds=("phase_nonwins_le(c*n+1)",), audits=("zero_sum", "table"),
            )
        )
    rows += [
        SuiteRow(
            "wsls:shift/wsls-auto", "wsls:shift", "wsls-auto",
            bounds=("total_nonwins_le(2*n**2-2*n+1+n+1)", "total_nonwins_le(2*n**2-2*n+1+probe)"),
            audits=("zero_sum", "table", "tie_policy"),
        ),
        SuiteRow(
            "wsls:stay/wsls-auto", "wsls:stay", "wsls-auto",
            bounds=("total_nonwins_le(n**2-n+2+n+1)", "total_nonwins_le(n**2-n+2+probe)"),
            audits=("zero_sum", "table", "tie_policy"),
        ),
    ]
    return Suite(tuple(rows), trials, seed)


def load_suite(path: str | Path, trials: int | None = None, seed: int | None = None) -> Suite:
    """Read a JSON suite: ``{"rows": [...], "trials": T, "seed": S}``."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"suite file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"suite file {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("rows"), list):
        raise ValueError(f"suite file {path} needs a top-level object with a 'rows' list")
    rows = tuple(SuiteRow.from_dict(r) for r in data["rows"])
    return Suite(
        rows,
        trials if trials is not None else int(data.get("trials", 20)),
        seed if seed is not None else int(data.get("seed", 0)),
    )


def check_match(row: SuiteRow, n: int, seed: int) -> MatchOutcome:
    game = row.game or f"random:{n}"
    try:
        transcript = run_match(MatchConfig(game, row.opponent, row.exploiter, row.rounds, seed))
    except Exception as exc:  # a resolution error fails this match, not the suite run
        return MatchOutcome(row.label, n, seed, False, (f"error: {type(exc).__name__}: {exc}",))
    failures = []
    if transcript.fault:
        failures.append(f"fault: {transcript.fault}")
    for text in row.bounds:
        report = verify_bound(transcript, BoundSpec.parse(text))
        if not report.ok:
            failures.append(str(report))
    for name in row.audits:
        audit = transcript.audit(name)
        if audit is None or audit.ok is not True:
            failures.append(f"audit {audit if audit else name + ': missing'}")
    ok = not failures
    return MatchOutcome(row.label, transcript.n, seed, ok, tuple(failures), None if ok else transcript_to_csv(transcript))


def _check(job: tuple[SuiteRow, int, int]) -> MatchOutcome:
    return check_match(*job)


def worker_count() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def run_suite(
    suite: Suite,
    n_range: tuple[int, int] | None = None,
    workers: int | None = None,
    failure_dir: str | Path | None = None,
) -> SuiteSummary:
    """Run every (row, n, seed) match; results keep suite order whatever the parallelism."""
    labels = [row.label for row in suite.rows]
    if len(set(labels)) != len(labels):
        raise ValueError("suite row labels must be unique")
    jobs = []
    for row in suite.rows:
        ns = row.ns if row.game is None else (0,)
        for n in ns:
            if n_range is not None and row.game is None and not n_range[0] <= n <= n_range[1]:
                continue
            for seed in range(suite.seed, suite.seed + suite.trials):
                jobs.append((row, n, seed))
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_check, jobs, chunksize=4))
    else:
        outcomes = [_check(j) for j in jobs]
    summaries = {row.label: RowSummary(row) for row in suite.rows}
    ordered = [summaries[row.label] for row in suite.rows]
    for outcome in outcomes:
        summaries[outcome.label].outcomes.append(outcome)
    if failure_dir is not None:
        out = Path(failure_dir)
        for outcome in outcomes:
            if outcome.csv is not None:
                out.mkdir(parents=True, exist_ok=True)
                safe = outcome.label.replace("/", "_").replace(":", "-").replace("+", "-")
                (out / f"{safe}_n{outcome.n}_s{outcome.seed}.csv").write_text(outcome.csv)
    ordered = [r for r in ordered if r.outcomes or n_range is None]
    return SuiteSummary(ordered)


def parse_n_range(text: str) -> tuple[int, int]:
    """``A..B`` (inclusive) or a single ``N``."""
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise ValueError(f"bad n range {text!r}; expected A..B") from None
    if a > b:
        raise ValueError(f"empty n range {text!r}")
    return a, b
