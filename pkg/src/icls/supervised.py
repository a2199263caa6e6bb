"""Supervised least squares classification.

Classes are encoded as 0/1 targets, a linear model is fit by the
normal-equation solver, and predictions threshold the fitted score at 0.5.
Scores exactly at the threshold map to class 1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .errors import DimensionError, InputError
from .linalg import as_matrix, as_vector, solve_normal_equations

THRESHOLD = 0.5

# Slack accepted when validating that targets sit in [0, 1].
_BOX_SLACK = 1e-12


@dataclass(frozen=True)
class LinearModel:
    """Fitted coefficients plus the metadata needed to serialize them.

    ``beta`` has one entry per design-matrix column. When the design carries
    an intercept it is the leading all-ones column, hence ``intercept_first``.
    """

    beta: np.ndarray
    intercept_first: bool = True
    class0: str = "0"
    class1: str = "1"

    def __post_init__(self):
        beta = as_vector(self.beta, "beta").copy()
        beta.flags.writeable = False
        object.__setattr__(self, "beta", beta)

    @property
    def n_coefficients(self) -> int:
        return int(self.beta.shape[0])

    def with_classes(self, class0: str, class1: str) -> "LinearModel":
        return replace(self, class0=class0, class1=class1)

    def to_json(self) -> str:
        return json.dumps(
            {
                "beta": [float(b) for b in self.beta],
                "intercept_first": self.intercept_first,
                "class0": self.class0,
                "class1": self.class1,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "LinearModel":
        obj = json.loads(text)
        return cls(
            beta=np.asarray(obj["beta"], dtype=np.float64),
            intercept_first=bool(obj["intercept_first"]),
            class0=str(obj["class0"]),
            class1=str(obj["class1"]),
        )


def _validate_targets(labels: np.ndarray) -> np.ndarray:
    if labels.size and (labels.min() < -_BOX_SLACK or labels.max() > 1.0 + _BOX_SLACK):
        raise InputError("targets must lie in [0, 1]")
    return np.clip(labels, 0.0, 1.0)


def fit_supervised(design, labels) -> LinearModel:
    """Least squares fit of 0/1 (or fractional) targets on a design matrix."""
    x = as_matrix(design, "design")
    y = as_vector(labels, "labels")
    if x.shape[0] == 0:
        raise InputError("cannot fit on an empty design matrix")
    y = _validate_targets(y)
    return LinearModel(beta=solve_normal_equations(x, y))


def decision_values(model: LinearModel, design) -> np.ndarray:
    """Raw linear scores ``design @ beta``."""
    x = as_matrix(design, "design")
    if x.shape[1] != model.n_coefficients:
        raise DimensionError(
            f"design has {x.shape[1]} columns but model has {model.n_coefficients} coefficients"
        )
    return x @ model.beta


def classify(model: LinearModel, design) -> np.ndarray:
    """Predicted 0/1 labels; a score of exactly 0.5 maps to class 1."""
    return (decision_values(model, design) >= THRESHOLD).astype(np.float64)


def error_rate(predicted, actual) -> float:
    """Fraction of positions where two 0/1 label vectors disagree."""
    p = as_vector(predicted, "predicted")
    a = as_vector(actual, "actual")
    if p.shape[0] != a.shape[0]:
        raise DimensionError(
            f"predicted has length {p.shape[0]} but actual has length {a.shape[0]}"
        )
    if p.shape[0] == 0:
        raise InputError("error rate of empty label vectors is undefined")
    for name, v in (("predicted", p), ("actual", a)):
        if not np.all((v == 0.0) | (v == 1.0)):
            raise InputError(f"{name} must contain only 0/1 labels")
    return float(np.mean(p != a))


def empirical_risk(model: LinearModel, design, labels) -> float:
    """Mean squared residual of the model on the given rows."""
    x = as_matrix(design, "design")
    y = as_vector(labels, "labels")
    if x.shape[0] != y.shape[0]:
        raise DimensionError("design and labels disagree on row count")
    if x.shape[0] == 0:
        raise InputError("empirical risk of zero rows is undefined")
    resid = decision_values(model, x) - y
    return float(resid @ resid) / x.shape[0]
