"""Performance bounds checked against match transcripts.

Bound expressions are small arithmetic formulas over the match parameters:
``n`` (actions), ``R`` (rounds played), ``r`` (opponent window), ``c`` / ``b``
(generic learner schedule), ``H`` (initial hypothesis count), ``probe``
(rounds spent probing).  For example ``2*n**2 - 2*n + 1`` or ``clog2(H)``.
"""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass

from .arena import MatchTranscript

KINDS = (
    "suffix_all_wins",
    "total_nonwins_le",
    "phase_coupled",
    "phase_length",
    "phase_nonwins_le",
    "mistakes_le",
)

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.FloorDiv: operator.floordiv,
    ast.Pow: operator.pow,
    ast.Mod: operator.mod,
}
_FUNCS = {
    "clog2": lambda x: math.ceil(math.log2(x)) if x > 1 else 0,
    "max": max,
    "min": min,
}


def evaluate(expr: str, variables: dict[str, int]) -> int:
    """Evaluate an integer formula; anything beyond arithmetic is rejected."""

    def ev(node: ast.AST) -> int:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in variables:
                raise ValueError(f"unknown variable {node.id!r} in {expr!r}")
            return variables[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS:
            if node.keywords:
                raise ValueError(f"keyword arguments are not allowed in {expr!r}")
            return _FUNCS[node.func.id](*(ev(a) for a in node.args))
        raise ValueError(f"unsupported syntax in bound expression {expr!r}")

    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"bad bound expression {expr!r}: {exc.msg}") from None
    return int(ev(tree))


@dataclass(frozen=True)
class BoundSpec:
    kind: str
    expr: str = ""

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown bound kind {self.kind!r}")
        if self.kind != "phase_coupled" and not self.expr:
            raise ValueError(f"{self.kind} needs an expression")

    def __str__(self) -> str:
        return f"{self.kind}({self.expr})" if self.expr else self.kind

    @classmethod
    def parse(cls, text: str) -> BoundSpec:
        """``kind`` or ``kind(expr)``."""
        text = text.strip()
        if "(" not in text:
            return cls(text)
        kind, _, rest = text.partition("(")
        if not rest.endswith(")"):
            raise ValueError(f"unbalanced bound {text!r}")
        return cls(kind.strip(), rest[:-1].strip())


@dataclass(frozen=True)
class BoundReport:
    bound: BoundSpec
    ok: bool
    detail: str
    first_violation: int | None = None

    def __str__(self) -> str:
        status = "pass" if self.ok else "FAIL"
        where = f" at round {self.first_violation}" if self.first_violation is not None else ""
        return f"{self.bound}: {status}{where} ({self.detail})"


def variables_for(transcript: MatchTranscript) -> dict[str, int]:
    return {"n": transcript.n, "R": len(transcript.records), **transcript.params}


def verify_bound(transcript: MatchTranscript, bound: BoundSpec) -> BoundReport:
    """Check one bound; failures name the first round that breaks it where there is one."""
    records = transcript.records
    kind = bound.kind
    if transcript.fault:
        return BoundReport(bound, False, f"match faulted: {transcript.fault}")
    value = evaluate(bound.expr, variables_for(transcript)) if bound.expr else None
    learned = transcript.learning_rounds

    if kind == "suffix_all_wins":
        bad = [r.round for r in records if r.round >= value and r.payoff != 1]
        if bad:
            return BoundReport(bound, False, f"{len(bad)} non-wins from round {value}", bad[0])
        return BoundReport(bound, True, f"all wins from round {value}")

    if kind == "total_nonwins_le":
        bad = transcript.nonwins
        if len(bad) > value:
            return BoundReport(bound, False, f"{len(bad)} non-wins > {value}", bad[value])
        return BoundReport(bound, True, f"{len(bad)} non-wins <= {value}")

    if kind == "mistakes_le":
        misses = [r.round for r in records if r.correct is False]
        if len(misses) > value:
            return BoundReport(bound, False, f"{len(misses)} mistakes > {value}", misses[value])
        return BoundReport(bound, True, f"{len(misses)} mistakes <= {value}")

    if learned is None:
        return BoundReport(bound, False, "exploiter declared no learning phase")

    if kind == "phase_length":
        if learned != value:
            return BoundReport(bound, False, f"learning phase lasted {learned} rounds, expected {value}")
        return BoundReport(bound, True, f"learning phase lasted {learned} rounds")

    if kind == "phase_nonwins_le":
        bad = [r.round for r in records if r.round <= learned and r.payoff != 1]
        if len(bad) > value:
            return BoundReport(bound, False, f"{len(bad)} learning-phase non-wins > {value}", bad[value])
        return BoundReport(bound, True, f"{len(bad)} learning-phase non-wins <= {value}")

    if kind == "phase_coupled":
        unflagged = [
            r.round for r in records if r.round > learned and r.payoff != 1 and not (r.predicted is not None and r.correct is False)
        ]
        if unflagged:
            return BoundReport(bound, False, f"{len(unflagged)} non-wins without a prediction mistake", unflagged[0])
        late = sum(1 for r in records if r.round > learned and r.payoff != 1)
        return BoundReport(bound, True, f"{late} post-learning non-wins, all flagged")

    raise AssertionError(kind)
