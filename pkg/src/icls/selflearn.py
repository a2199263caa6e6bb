"""Self-learning baseline: iterative hard pseudo-labeling.

Start from the supervised fit, classify the unlabeled rows, refit on the
labeled rows plus the imputed ones, and repeat until the imputed labels stop
changing. Hard labels can oscillate, so a 2-cycle (labels equal to those
from two iterations back) terminates the loop with whichever of the two
competing iterates has lower labeled-data risk.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .linalg import as_matrix, as_vector, normal_projector
from .supervised import LinearModel, classify, empirical_risk, fit_supervised

DEFAULT_MAX_ITER = 100


@dataclass(frozen=True)
class SelfLearnReport:
    iterations: int
    label_flips_per_iter: tuple[int, ...]
    converged: bool


def fit_self_learning(
    labeled_design,
    labels,
    unlabeled_design,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[LinearModel, np.ndarray, SelfLearnReport]:
    """Returns (model, hard labels for the unlabeled rows, report).

    One iteration is one classify pass over the unlabeled rows. On
    convergence the returned labels are both what the model predicts and
    what it was refit on. On a 2-cycle or when ``max_iter`` stops a refit
    loop, the returned labels are the ones the returned model was fit on, so
    the pair stays refit-consistent; ``converged`` is False in those cases.
    """
    x = as_matrix(labeled_design, "labeled design")
    y = as_vector(labels, "labels")
    xu = as_matrix(unlabeled_design, "unlabeled design")
    if x.shape[1] != xu.shape[1]:
        raise DimensionError(
            f"labeled design has {x.shape[1]} columns, unlabeled has {xu.shape[1]}"
        )

    model = fit_supervised(x, y)
    if xu.shape[0] == 0:
        return model, np.empty(0, dtype=np.float64), SelfLearnReport(1, (), True)

    # Targets change between refits but the stacked design does not, so the
    # coefficient map is one fixed projector applied to [y; imputed].
    projector = normal_projector(np.vstack([x, xu]))

    imputed = classify(model, xu)
    train_labels = imputed  # placeholder until a refit happens
    flips: list[int] = []
    iterations = 1
    prev_imputed: np.ndarray | None = None
    converged = False

    while iterations < max_iter:
        new_model = LinearModel(beta=projector @ np.concatenate([y, imputed]))
        new_imputed = classify(new_model, xu)
        iterations += 1
        flips.append(int(np.sum(new_imputed != imputed)))

        if flips[-1] == 0:
            model, train_labels = new_model, imputed
            converged = True
            break

        if prev_imputed is not None and np.array_equal(new_imputed, prev_imputed):
            # 2-cycle: `model` (fit on prev_imputed) and `new_model` (fit on
            # imputed) alternate forever; keep the lower-risk one.
            if empirical_risk(new_model, x, y) <= empirical_risk(model, x, y):
                model, train_labels = new_model, imputed
            else:
                train_labels = prev_imputed
            break

        model, prev_imputed, imputed = new_model, imputed, new_imputed
        train_labels = prev_imputed

    return model, train_labels, SelfLearnReport(iterations, tuple(flips), converged)
