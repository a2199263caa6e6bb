"""Semi-supervised least squares fit over box-constrained soft labelings.

The idea: refitting the least squares classifier on labeled plus unlabeled
rows under any fractional labeling ``v`` of the unlabeled rows yields
coefficients ``beta(v) = P [y; v]`` with a fixed projector
``P = pinv(Xe'Xe) Xe'`` built from the stacked design ``Xe``. Minimizing the
labeled-data squared loss over that reachable set is therefore a convex
quadratic program in ``v`` with unit-box constraints. This module builds the
problem operators once, solves the QP, and rebuilds coefficients from the
optimal labeling.

The inner QP loop is the hot path of the benchmark harnesses. A compiled
kernel is used when the extension built from ``_boxqp_c.pyx`` is available;
otherwise the pure numpy twin takes over. Both implement the same algorithm.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _boxqp_py
from .errors import DimensionError, InputError
from .linalg import as_matrix, as_vector, normal_projector
from .supervised import LinearModel, fit_supervised

try:
    from . import _boxqp_c as _kernel_module
except ImportError:  # extension not built; fall back to numpy
    _kernel_module = _boxqp_py

_solve_kernel = _kernel_module.solve_kernel

# Accepted violation of the unit box in caller-supplied points.
_BOX_SLACK = 1e-12

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 5000


def kernel_name() -> str:
    """Which QP kernel was selected at import: 'compiled' or 'python'."""
    return _kernel_module.KERNEL_NAME


@dataclass(frozen=True)
class IclsProblem:
    """Precomputed operators of the soft-label QP.

    ``projector`` maps a stacked target vector [labels; soft labels] to
    coefficients. ``a_labeled`` / ``a_unlabeled`` are the column blocks of
    ``X @ projector`` restricted to labeled and unlabeled positions, so the
    fitted values on labeled rows are ``a_labeled @ labels +
    a_unlabeled @ v``. ``residual_base`` caches the constant part
    ``a_labeled @ labels - labels`` of the residual.
    """

    a_labeled: np.ndarray
    a_unlabeled: np.ndarray
    labels: np.ndarray
    projector: np.ndarray
    residual_base: np.ndarray

    def __post_init__(self):
        for name in ("a_labeled", "a_unlabeled", "labels", "projector", "residual_base"):
            arr = np.array(getattr(self, name), dtype=np.float64, order="C")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def n_labeled(self) -> int:
        return int(self.a_labeled.shape[0])

    @property
    def n_unlabeled(self) -> int:
        return int(self.a_unlabeled.shape[1])


@dataclass(frozen=True)
class SolverReport:
    iterations: int
    final_objective: float
    projected_gradient_inf_norm: float
    converged: bool


def build_problem(labeled_design, labels, unlabeled_design) -> IclsProblem:
    """Assemble the QP operators for one (labeled, unlabeled) data pair."""
    x = as_matrix(labeled_design, "labeled design")
    y = as_vector(labels, "labels")
    xu = as_matrix(unlabeled_design, "unlabeled design")
    if x.shape[1] != xu.shape[1]:
        raise DimensionError(
            f"labeled design has {x.shape[1]} columns, unlabeled has {xu.shape[1]}"
        )
    if x.shape[0] != y.shape[0]:
        raise DimensionError(
            f"labeled design has {x.shape[0]} rows but labels has length {y.shape[0]}"
        )
    if x.shape[0] == 0:
        raise InputError("need at least one labeled row")

    stacked = np.vstack([x, xu])
    projector = normal_projector(stacked)
    hat = x @ projector
    n_l = x.shape[0]
    a_labeled = np.ascontiguousarray(hat[:, :n_l])
    a_unlabeled = np.ascontiguousarray(hat[:, n_l:])
    residual_base = a_labeled @ y - y
    return IclsProblem(
        a_labeled=a_labeled,
        a_unlabeled=a_unlabeled,
        labels=y,
        projector=projector,
        residual_base=residual_base,
    )


def _check_soft_labels(problem: IclsProblem, y_u, name: str = "soft labels") -> np.ndarray:
    v = as_vector(y_u, name)
    if v.shape[0] != problem.n_unlabeled:
        raise DimensionError(
            f"{name} has length {v.shape[0]}, expected {problem.n_unlabeled}"
        )
    return v


def objective(problem: IclsProblem, y_u) -> float:
    """Mean squared labeled-row residual under soft labeling ``y_u``."""
    v = _check_soft_labels(problem, y_u)
    r = problem.a_unlabeled @ v + problem.residual_base
    return float(r @ r) / problem.n_labeled


def gradient(problem: IclsProblem, y_u) -> np.ndarray:
    """Gradient of ``objective`` with respect to the soft labels."""
    v = _check_soft_labels(problem, y_u)
    r = problem.a_unlabeled @ v + problem.residual_base
    return (2.0 / problem.n_labeled) * (r @ problem.a_unlabeled)


def projected_gradient(y_u, grad) -> np.ndarray:
    """Gradient with components zeroed where a unit-box bound is active and
    the component points further outside the box."""
    v = np.asarray(y_u, dtype=np.float64)
    g = np.asarray(grad, dtype=np.float64)
    out = np.where((v <= 0.0) & (g > 0.0), 0.0, g)
    return np.where((v >= 1.0) & (out < 0.0), 0.0, out)


def solve_box_qp(
    problem: IclsProblem,
    init,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[np.ndarray, SolverReport]:
    """Minimize the soft-label objective over the unit box.

    Returns the optimal soft labels (clamped exactly into [0, 1]) and a
    report. Hitting ``max_iter`` is not an error: the best iterate comes back
    with ``converged=False``.
    """
    if tol <= 0.0:
        raise InputError("tol must be positive")
    if max_iter < 0:
        raise InputError("max_iter must be non-negative")
    v0 = _check_soft_labels(problem, init, "init")
    if v0.size and (v0.min() < -_BOX_SLACK or v0.max() > 1.0 + _BOX_SLACK):
        raise InputError("init must lie inside the unit box")

    if problem.n_unlabeled == 0:
        report = SolverReport(
            iterations=0,
            final_objective=objective(problem, v0),
            projected_gradient_inf_norm=0.0,
            converged=True,
        )
        return v0.copy(), report

    v, iterations, final_objective, pg_inf, converged = _solve_kernel(
        problem.a_unlabeled, problem.residual_base, v0, tol, max_iter
    )
    v = np.clip(v, 0.0, 1.0)
    report = SolverReport(
        iterations=int(iterations),
        final_objective=float(final_objective),
        projected_gradient_inf_norm=float(pg_inf),
        converged=bool(converged),
    )
    return v, report


def fit_icls(
    labeled_design,
    labels,
    unlabeled_design,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[LinearModel, np.ndarray, SolverReport]:
    """Fit the semi-supervised classifier.

    Solves the soft-label QP starting from the supervised model's clamped
    decision values on the unlabeled rows, then rebuilds coefficients through
    the projector. With no unlabeled rows this reduces exactly to the
    supervised fit.
    """
    problem = build_problem(labeled_design, labels, unlabeled_design)
    if problem.n_unlabeled == 0:
        init = np.empty(0, dtype=np.float64)
    else:
        beta_sup = fit_supervised(labeled_design, labels).beta
        init = np.clip(as_matrix(unlabeled_design) @ beta_sup, 0.0, 1.0)
    y_u, report = solve_box_qp(problem, init, tol=tol, max_iter=max_iter)
    beta = problem.projector @ np.concatenate([problem.labels, y_u])
    return LinearModel(beta=beta), y_u, report
