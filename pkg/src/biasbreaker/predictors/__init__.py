from .ellipsoid import Ellipsoid, EllipsoidPredictor, MistakeConstraint, constraint_margin, mistake_constraint
from .halving import Hypothesis, HypothesisSpace

__all__ = [
    "Ellipsoid",
    "EllipsoidPredictor",
    "Hypothesis",
    "HypothesisSpace",
    "MistakeConstraint",
    "constraint_margin",
    "mistake_constraint",
]
