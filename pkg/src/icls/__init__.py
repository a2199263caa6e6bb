"""Semi-supervised least squares classification toolkit.

The semi-supervised fit minimizes the labeled-data squared loss over every
coefficient vector reachable by refitting on labeled plus unlabeled rows
under some fractional labeling of the unlabeled rows, which is a convex
box-constrained quadratic program. A self-learning baseline, a univariate
risk non-degradation checker, and benchmark harnesses round out the package.
"""
from .data import (
    Dataset,
    GaussianSpec,
    SplitScenario,
    gen_synthetic,
    load_csv,
    load_registry,
    make_split,
    validate_against_registry,
)
from .experiments import (
    CvReport,
    LearningCurveReport,
    WilcoxonResult,
    default_labeled_size,
    run_cv,
    run_learning_curve,
    standard_error,
    wilcoxon_signed_rank,
)
from .linalg import pseudo_inverse, solve_normal_equations
from .selflearn import SelfLearnReport, fit_self_learning
from .solver import (
    IclsProblem,
    SolverReport,
    build_problem,
    fit_icls,
    gradient,
    kernel_name,
    objective,
    solve_box_qp,
)
from .supervised import (
    LinearModel,
    classify,
    decision_values,
    empirical_risk,
    error_rate,
    fit_supervised,
)
from .theory1d import (
    BetaInterval,
    Population1D,
    NonDegradationReport,
    constrained_interval,
    icls_1d,
    risk_1d,
    supervised_beta_1d,
    two_gaussian_population,
    verify_non_degradation,
)

__version__ = "0.1.0"

__all__ = [
    "BetaInterval",
    "CvReport",
    "Dataset",
    "GaussianSpec",
    "IclsProblem",
    "LearningCurveReport",
    "LinearModel",
    "Population1D",
    "SelfLearnReport",
    "SolverReport",
    "SplitScenario",
    "NonDegradationReport",
    "WilcoxonResult",
    "build_problem",
    "classify",
    "constrained_interval",
    "decision_values",
    "default_labeled_size",
    "empirical_risk",
    "error_rate",
    "fit_icls",
    "fit_self_learning",
    "fit_supervised",
    "gen_synthetic",
    "gradient",
    "icls_1d",
    "kernel_name",
    "load_csv",
    "load_registry",
    "make_split",
    "objective",
    "pseudo_inverse",
    "risk_1d",
    "run_cv",
    "run_learning_curve",
    "solve_box_qp",
    "solve_normal_equations",
    "standard_error",
    "supervised_beta_1d",
    "two_gaussian_population",
    "validate_against_registry",
    "verify_non_degradation",
    "wilcoxon_signed_rank",
]
