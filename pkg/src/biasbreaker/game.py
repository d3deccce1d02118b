"""Permissible symmetric zero-sum games and their on-disk format.

A game over ``n`` actions is an antisymmetric ``n x n`` table with entries in
``{-1, 0, +1}``; ``payoffs[i][j]`` is the row player's payoff when playing
action ``i`` against action ``j``.  A game is *permissible* when every action
beats at least one action and is beaten by at least one action.

Actions are plain 0-based integers everywhere; names are cosmetic.
"""

from __future__ import annotations

import itertools
import json
import random
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

from .errors import GameFormatError, GameInputError

PAYOFF_VALUES = (-1, 0, 1)
FORMAT_VERSION = 1
MIN_ACTIONS = 3


@dataclass(frozen=True)
class GameMatrix:
    """An antisymmetric payoff table over ``{-1, 0, +1}``.

    Construction checks shape, entry domain and antisymmetry (which forces a
    zero diagonal).  Permissibility is *not* enforced here so that negative
    examples such as the all-zero game can still be represented; use
    :func:`validate_permissible` for that.
    """

    payoffs: tuple[tuple[int, ...], ...]
    action_names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in row) for row in self.payoffs)
        object.__setattr__(self, "payoffs", rows)
        n = len(rows)
        if n < MIN_ACTIONS:
            raise GameInputError(f"no permissible game exists for n < {MIN_ACTIONS} (got n={n})")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise GameInputError(f"payoffs row {i} has {len(row)} entries, expected {n}")
            for j, v in enumerate(row):
                if v not in PAYOFF_VALUES:
                    raise GameInputError(f"entry out of domain at [{i}][{j}]: {v}")
        for i in range(n):
            for j in range(i, n):
                if rows[i][j] != -rows[j][i]:
                    raise GameInputError(f"antisymmetry violated at [{i}][{j}]")
        if self.action_names is not None:
            names = tuple(str(a) for a in self.action_names)
            if len(names) != n:
                raise GameInputError(f"expected {n} action names, got {len(names)}")
            object.__setattr__(self, "action_names", names)

    @property
    def n(self) -> int:
        return len(self.payoffs)

    def payoff(self, i: int, j: int) -> int:
        """Row player's payoff for action ``i`` against action ``j``."""
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise GameInputError(f"action index out of range for n={self.n}: ({i}, {j})")
        return self.payoffs[i][j]

    def beaten_by(self, j: int) -> list[int]:
        """Actions that beat ``j``."""
        return [i for i in range(self.n) if self.payoffs[i][j] == 1]

    def beats(self, i: int) -> list[int]:
        """Actions that ``i`` beats."""
        return [j for j in range(self.n) if self.payoffs[i][j] == 1]

    def name(self, i: int) -> str:
        return self.action_names[i] if self.action_names else str(i)

    def reversed(self) -> GameMatrix:
        """The same game with every win and loss swapped."""
        return GameMatrix(tuple(tuple(-v for v in row) for row in self.payoffs), self.action_names)

    def __str__(self) -> str:
        names = [self.name(i) for i in range(self.n)]
        width = max(2, *(len(s) for s in names))
        head = " " * width + " " + " ".join(s.rjust(width) for s in names)
        body = [
            names[i].rjust(width) + " " + " ".join(str(v).rjust(width) for v in row)
            for i, row in enumerate(self.payoffs)
        ]
        return "\n".join([head, *body])


@dataclass(frozen=True)
class ActionOrdering:
    """A fixed permutation of actions used for tie-breaking and shifting."""

    order: tuple[int, ...]
    _rank: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        order = tuple(int(a) for a in self.order)
        if sorted(order) != list(range(len(order))) or not order:
            raise GameInputError(f"ordering is not a permutation of 0..n-1: {order}")
        rank = [0] * len(order)
        for pos, a in enumerate(order):
            rank[a] = pos
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "_rank", tuple(rank))

    @classmethod
    def identity(cls, n: int) -> ActionOrdering:
        return cls(tuple(range(n)))

    @classmethod
    def random(cls, n: int, rng: random.Random) -> ActionOrdering:
        order = list(range(n))
        rng.shuffle(order)
        return cls(tuple(order))

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def first(self) -> int:
        return self.order[0]

    def rank(self, action: int) -> int:
        """0-based position of ``action`` in the ordering."""
        return self._rank[action]

    def successor(self, action: int) -> int:
        """The action after ``action``, wrapping from last to first."""
        return self.order[(self._rank[action] + 1) % len(self.order)]

    def earliest(self, actions: Iterable[int]) -> int:
        return min(actions, key=self._rank.__getitem__)

    def __str__(self) -> str:
        return ",".join(str(a) for a in self.order)


class History(tuple):
    """Append-only sequence of ``(exploiter_action, opponent_action)`` pairs."""

    def append(self, ours: int, theirs: int) -> History:  # type: ignore[override]
        return History((*self, (ours, theirs)))

    @property
    def own_actions(self) -> tuple[int, ...]:
        return tuple(p[0] for p in self)

    @property
    def opponent_actions(self) -> tuple[int, ...]:
        return tuple(p[1] for p in self)


def play_counts(actions: Iterable[int], n: int) -> list[int]:
    counts = [0] * n
    for a in actions:
        counts[a] += 1
    return counts


# --- permissibility ---------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    row: int | None = None
    col: int | None = None

    def __str__(self) -> str:
        where = ""
        if self.row is not None and self.col is not None:
            where = f" at [{self.row}][{self.col}]"
        elif self.row is not None:
            where = f" for action {self.row}"
        return self.kind + where


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "pass"
        return "fail: " + "; ".join(str(v) for v in self.violations)


def validate_permissible(game: GameMatrix | Sequence[Sequence[int]]) -> ValidationReport:
    """Check every clause of permissibility and report all failures.

    Accepts a :class:`GameMatrix` or a raw nested table, so that documents
    which fail the constructor's checks can still be diagnosed.
    """
    table = game.payoffs if isinstance(game, GameMatrix) else [list(r) for r in game]
    n = len(table)
    out: list[Violation] = []
    if n < MIN_ACTIONS:
        out.append(Violation(f"too few actions (n={n} < {MIN_ACTIONS})"))
    for i, row in enumerate(table):
        if len(row) != n:
            out.append(Violation("not square", row=i))
    if out and any(v.kind == "not square" for v in out):
        return ValidationReport(tuple(out))
    for i in range(n):
        for j in range(n):
            if table[i][j] not in PAYOFF_VALUES:
                out.append(Violation("entry out of domain", i, j))
    for i in range(n):
        if table[i][i] != 0:
            out.append(Violation("nonzero diagonal", i, i))
        for j in range(i + 1, n):
            if table[i][j] != -table[j][i]:
                out.append(Violation("antisymmetry violated", i, j))
    for i in range(n):
        if not any(table[i][j] == 1 for j in range(n)):
            out.append(Violation("no winning action", row=i))
        if not any(table[j][i] == 1 for j in range(n)):
            out.append(Violation("unbeatable action", row=i))
    return ValidationReport(tuple(out))


def is_permissible(game: GameMatrix) -> bool:
    return validate_permissible(game).ok


def enumerate_antisymmetric(n: int) -> Iterator[GameMatrix]:
    """All antisymmetric ``{-1,0,+1}`` tables of size ``n``, in lexicographic order.

    Order is row-major over the full table with ``-1 < 0 < +1``.  The lower
    triangle is determined by earlier rows, so iterating the upper triangle
    in row-major order with values ascending yields exactly that order.
    """
    cells = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for values in itertools.product(PAYOFF_VALUES, repeat=len(cells)):
        table = [[0] * n for _ in range(n)]
        for (i, j), v in zip(cells, values):
            table[i][j] = v
            table[j][i] = -v
        yield GameMatrix(tuple(map(tuple, table)))


def generate_permissible(n: int, seed: int) -> GameMatrix:
    """Draw a uniformly random permissible game by rejection sampling."""
    if n < MIN_ACTIONS:
        raise GameInputError(f"no permissible game exists for n < {MIN_ACTIONS} (got n={n})")
    rng = random.Random(seed)
    while True:
        table = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                v = rng.choice(PAYOFF_VALUES)
                table[i][j] = v
                table[j][i] = -v
        if all(1 in row for row in table) and all(-1 in row for row in table):
            return GameMatrix(tuple(map(tuple, table)))


# --- built-in games -----------------------------------------------------------

_RPS = ((0, -1, 1), (1, 0, -1), (-1, 1, 0))

# Two six-action extensions of rock-paper-scissors that differ only in how
# the primed and unprimed triples interact.  Both are consistent with the
# same Myopic Best Responder play, yet best-responding according to the
# second one never wins when the first one is true.
_M_STAR = (
    (0, -1, 1, 1, 0, 0),
    (1, 0, -1, 1, 1, 0),
    (-1, 1, 0, 0, 1, 1),
    (-1, -1, 0, 0, -1, 1),
    (0, -1, -1, 1, 0, -1),
    (0, 0, -1, -1, 1, 0),
)
_M_LEX = (
    (0, -1, 1, 1, 0, -1),
    (1, 0, -1, -1, 1, 0),
    (-1, 1, 0, 0, -1, 1),
    (-1, 1, 0, 0, -1, 1),
    (0, -1, 1, 1, 0, -1),
    (1, 0, -1, -1, 1, 0),
)
_SIX_NAMES = ("R", "P", "S", "R'", "P'", "S'")

BUILTIN_GAMES = {
    "rps": (_RPS, ("R", "P", "S")),
    "m_star": (_M_STAR, _SIX_NAMES),
    "m_lex": (_M_LEX, _SIX_NAMES),
}


def builtin_game(name: str) -> GameMatrix:
    try:
        table, names = BUILTIN_GAMES[name]
    except KeyError:
        raise GameInputError(f"unknown builtin game {name!r}; choose from {sorted(BUILTIN_GAMES)}") from None
    return GameMatrix(table, names)


# --- file format --------------------------------------------------------------


def serialize_game(game: GameMatrix) -> str:
    """Render ``game`` as a version-1 JSON document, one payoff row per line."""
    rows = ",\n".join("    [" + ", ".join(str(v) for v in row) + "]" for row in game.payoffs)
    parts = [
        f'  "version": {FORMAT_VERSION}',
        f'  "n": {game.n}',
        '  "payoffs": [\n' + rows + "\n  ]",
    ]
    if game.action_names is not None:
        parts.append('  "actions": ' + json.dumps(list(game.action_names)))
    return "{\n" + ",\n".join(parts) + "\n}\n"


def read_document(text: str | bytes) -> dict:
    """Parse and structurally check a game document without building a game.

    Returns a dict with ``n``, ``payoffs`` (list of lists) and ``actions``.
    Shape and entry-domain problems raise; semantic checks are left to
    :func:`validate_permissible`.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameFormatError(f"malformed document: {exc}") from None
    if not isinstance(doc, dict):
        raise GameFormatError("malformed document: top level must be an object")
    unknown = set(doc) - {"version", "n", "payoffs", "actions"}
    if unknown:
        raise GameFormatError(f"unknown field(s): {sorted(unknown)}")
    if doc.get("version") != FORMAT_VERSION:
        raise GameFormatError(f"field 'version': expected {FORMAT_VERSION}, got {doc.get('version')!r}")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise GameFormatError(f"field 'n': expected a positive integer, got {n!r}")
    payoffs = doc.get("payoffs")
    if not isinstance(payoffs, list) or len(payoffs) != n:
        raise GameFormatError(f"field 'payoffs': expected a list of {n} rows")
    for i, row in enumerate(payoffs):
        if not isinstance(row, list) or len(row) != n:
            raise GameFormatError(f"field 'payoffs': row {i} is not a list of {n} entries (non-square table)")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, int) or v not in PAYOFF_VALUES:
                raise GameFormatError(f"field 'payoffs': entry out of domain at [{i}][{j}]: {v!r}")
    actions = doc.get("actions")
    if actions is not None:
        if not isinstance(actions, list) or len(actions) != n or not all(isinstance(a, str) for a in actions):
            raise GameFormatError(f"field 'actions': expected a list of {n} strings")
    return {"n": n, "payoffs": payoffs, "actions": actions}


def parse_game(text: str | bytes, allow_nonpermissible: bool = False) -> GameMatrix:
    """Parse a game document.

    Antisymmetry is always required.  The beat/lose clauses of permissibility
    are enforced unless ``allow_nonpermissible`` is set.
    """
    doc = read_document(text)
    report = validate_permissible(doc["payoffs"])
    for v in report.violations:
        if v.kind in ("antisymmetry violated", "nonzero diagonal", "too few actions") or not allow_nonpermissible:
            raise GameFormatError(f"field 'payoffs': {v}")
    actions = tuple(doc["actions"]) if doc["actions"] is not None else None
    return GameMatrix(tuple(map(tuple, doc["payoffs"])), actions)
