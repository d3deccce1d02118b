"""Central-cut ellipsoid estimate of the payoff table, driven by prediction mistakes.

The estimate lives in ``n*n`` dimensions (one coordinate per payoff entry).
It predicts the opponent's choice by scoring each action against our play
counts.  When a prediction is wrong, the opponent's actual choice must have
scored strictly higher than the predicted one under the (perturbed) true
table; that inequality is the separating halfspace for the next cut.

Two scoring modes:

``net``
    Net score of action ``i`` is ``sum_j c_j * m[i, j]`` where ``c_j`` counts
    how often we played ``j`` (optionally over the last ``window`` rounds).
``avg``
    Average score ``sum_j c_ij * m[i, j] / sum_j c_ij`` where ``c_ij`` counts
    rounds in which the opponent played ``i`` and we played ``j``; an action
    the opponent never played scores 0.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from ..errors import ConditioningError

MODES = ("net", "avg")
COLLAPSE_TOL = 1e-30


def constraint_margin(n: int, mode: str, span: int) -> float:
    """Strictness margin for mistake constraints.

    ``span`` is the number of rounds that can enter a score: the match
    length for unlimited history, the window otherwise.  Half of the gap the
    tie-breaking perturbation guarantees, squared span in average mode.
    """
    scale = span if mode == "net" else span * span
    return 1.0 / (2.0 * scale * (n * n - n))


@dataclass(frozen=True)
class MistakeConstraint:
    """``sum(weights * m) >= margin``: actual's modeled score beats predicted's."""

    weights: np.ndarray  # shape (n, n)
    margin: float
    predicted: int
    actual: int

    def slack(self, point: np.ndarray) -> float:
        return float(np.dot(self.weights.ravel(), np.asarray(point, dtype=float).ravel())) - self.margin

    def satisfied_by(self, point: np.ndarray) -> bool:
        return self.slack(point) >= 0.0


def mistake_constraint(
    counts: np.ndarray, predicted: int, actual: int, mode: str, margin: float
) -> MistakeConstraint:
    """Build the constraint revealed when ``actual`` was played instead of ``predicted``.

    ``counts`` is the length-``n`` vector ``c_j`` in net mode and the
    ``n x n`` matrix ``c_ij`` in average mode, taken from the history the
    opponent saw when it chose.
    """
    if predicted == actual:
        raise ValueError("not a mistake: predicted == actual")
    counts = np.asarray(counts, dtype=float)
    n = counts.shape[0]
    w = np.zeros((n, n))
    if mode == "net":
        w[actual] += counts
        w[predicted] -= counts
    elif mode == "avg":
        # an action the opponent never played keeps its initial average 0: zero row
        for row, sign in ((actual, 1.0), (predicted, -1.0)):
            total = counts[row].sum()
            if total > 0:
                w[row] += sign * counts[row] / total
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return MistakeConstraint(w, margin, predicted, actual)


class Ellipsoid:
    """``{x : (x - center)^T shape^{-1} (x - center) <= 1}``."""

    def __init__(self, dim: int, radius: float):
        self.dim = dim
        self.center = np.zeros(dim)
        self.shape = np.eye(dim) * radius**2
        self.cuts = 0

    def log_volume(self) -> float:
        """Log volume up to the unit-ball constant."""
        sign, logdet = np.linalg.slogdet(self.shape)
        if sign <= 0:
            raise ConditioningError("shape matrix is not positive definite")
        return 0.5 * logdet

    def cut(self, w: np.ndarray) -> None:
        """Central cut keeping the half ``{x : w.x >= w.center}``."""
        d = self.dim
        w = np.asarray(w, dtype=float).ravel()
        norm = np.linalg.norm(w)
        if norm == 0.0:
            raise ConditioningError("zero cut direction")
        w = w / norm
        pw = self.shape @ w
        q = float(w @ pw)
        if not q > COLLAPSE_TOL:
            raise ConditioningError(f"w^T P w = {q:.3e} <= {COLLAPSE_TOL:g}")
        step = pw / math.sqrt(q)
        self.center = self.center + step / (d + 1)
        shape = (d * d / (d * d - 1.0)) * (self.shape - (2.0 / (d + 1)) * np.outer(step, step))
        self.shape = 0.5 * (shape + shape.T)
        self.cuts += 1

    @staticmethod
    def volume_ratio_bound(dim: int) -> float:
        return math.exp(-1.0 / (2 * (dim + 1)))


class EllipsoidPredictor:
    """Predicts a score-maximizing opponent from an ellipsoid payoff estimate.

    Call :meth:`record` after every round (including rounds in which no
    prediction was made) so the counts stay current, :meth:`predict` before
    a round, and :meth:`learn` with the opponent's actual action after it.
    """

    def __init__(self, n: int, mode: str = "net", window: int | None = None, horizon: int = 1000):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        if window is not None and window < 1:
            raise ValueError("window must be positive")
        self.n = n
        self.mode = mode
        self.window = window
        self.margin = constraint_margin(n, mode, window if window is not None else max(horizon, 1))
        self.ellipsoid = Ellipsoid(n * n, float(n))
        self.constraints: list[MistakeConstraint] = []
        self.volume_ratios: list[float] = []
        self.predictions = 0
        self._recent: deque[tuple[int, int]] = deque()
        if mode == "net":
            self._counts = np.zeros(n)
        else:
            self._counts = np.zeros((n, n))
        self._pending: tuple[int, np.ndarray] | None = None

    @property
    def mistakes(self) -> int:
        return len(self.constraints)

    @property
    def center(self) -> np.ndarray:
        return self.ellipsoid.center.reshape(self.n, self.n)

    def counts(self) -> np.ndarray:
        return self._counts.copy()

    def record(self, ours: int, theirs: int) -> None:
        self._bump(ours, theirs, 1)
        if self.window is not None:
            self._recent.append((ours, theirs))
            if len(self._recent) > self.window:
                self._bump(*self._recent.popleft(), -1)

    def _bump(self, ours: int, theirs: int, delta: int) -> None:
        if self.mode == "net":
            self._counts[ours] += delta
        else:
            self._counts[theirs, ours] += delta

    def scores(self, counts: np.ndarray | None = None) -> np.ndarray:
        counts = self._counts if counts is None else counts
        m = self.center
        if self.mode == "net":
            return m @ counts
        totals = counts.sum(axis=1)
        raw = (counts * m).sum(axis=1)
        return np.divide(raw, totals, out=np.zeros(self.n), where=totals > 0)

    def predict(self) -> int:
        """Highest-scoring action; ties go to the lowest index."""
        action = int(np.argmax(self.scores()))
        self._pending = (action, self._counts.copy())
        self.predictions += 1
        return action

    def learn(self, actual: int) -> bool:
        """Feed back the opponent's actual action; cut on a mistake.  Returns correctness."""
        if self._pending is None:
            raise RuntimeError("learn() called without a pending prediction")
        predicted, counts = self._pending
        self._pending = None
        if predicted == actual:
            return True
        constraint = mistake_constraint(counts, predicted, actual, self.mode, self.margin)
        before = self.ellipsoid.log_volume()
        self.ellipsoid.cut(constraint.weights)
        self.volume_ratios.append(math.exp(self.ellipsoid.log_volume() - before))
        self.constraints.append(constraint)
        return False
