"""Benchmark harnesses: learning curves over unlabeled-set size and a
repeated k-fold cross-validation comparison, plus the statistics they need.

Both harnesses give supervised, self-learning, and the constrained
semi-supervised classifier identical splits within a repeat (paired design),
derive per-repeat seeds from the master seed, and aggregate in fixed index
order, so results are identical regardless of worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .data import Dataset, standardize_design
from .errors import DataError, DimensionError, InputError, ToolkitError
from .linalg import as_vector
from .selflearn import fit_self_learning
from .solver import fit_icls
from .supervised import classify, empirical_risk, error_rate, fit_supervised

CURVE_CLASSIFIERS = ("supervised", "self_learning", "icls")
CV_CLASSIFIERS = ("supervised", "self_learning", "icls", "oracle")
DEFAULT_U_SCHEDULE = tuple(2**k for k in range(1, 11))  # 2, 4, ..., 1024
DEFAULT_ALPHA = 0.01


def standard_error(values) -> float:
    """Sample standard deviation (n-1 denominator) over sqrt(n)."""
    v = as_vector(values, "values")
    n = v.shape[0]
    if n < 2:
        raise InputError("standard error needs at least 2 values")
    return float(np.std(v, ddof=1)) / math.sqrt(n)


def default_labeled_size(n_features: int, rule: str = "full-rank") -> int:
    """Labeled-set size for the harnesses, floored at 20.

    "full-rank" counts the intercept: features + 1 + 5. "literal" uses
    features + 5. Both keep the labeled design square-or-taller for the
    datasets in the registry.
    """
    if rule == "full-rank":
        return max(n_features + 6, 20)
    if rule == "literal":
        return max(n_features + 5, 20)
    raise InputError(f"unknown labeled-size rule {rule!r}")


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.shape[0], dtype=np.float64)
    sorted_vals = values[order]
    i = 0
    while i < values.shape[0]:
        j = i
        while j + 1 < values.shape[0] and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _normal_cdf(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float
    p_value: float
    significant: bool


def wilcoxon_signed_rank(paired_a, paired_b, alpha: float = DEFAULT_ALPHA) -> WilcoxonResult:
    """One-sided signed-rank test of whether ``a`` tends below ``b``.

    Zero differences are dropped; tied absolute differences get midranks.
    The statistic is the rank sum of the positive differences, so small
    values favor the alternative a < b. The null distribution is enumerated
    exactly for up to 20 nonzero differences and approximated by a
    tie-corrected, continuity-corrected normal beyond that.
    """
    a = as_vector(paired_a, "paired_a")
    b = as_vector(paired_b, "paired_b")
    if a.shape[0] != b.shape[0]:
        raise DimensionError("paired vectors must have equal length")
    if a.shape[0] < 5:
        raise InputError("need at least 5 pairs")

    diff = a - b
    diff = diff[diff != 0.0]
    m = diff.shape[0]
    if m == 0:
        return WilcoxonResult(statistic=0.0, p_value=1.0, significant=False)

    ranks = _midranks(np.abs(diff))
    t_plus = float(np.sum(ranks[diff > 0.0]))

    if m <= 20:
        sums = np.zeros(1, dtype=np.float64)
        for r in ranks:
            sums = np.concatenate([sums, sums + r])
        p = float(np.count_nonzero(sums <= t_plus + 1e-9)) / sums.shape[0]
    else:
        mu = float(np.sum(ranks)) / 2.0
        sigma = math.sqrt(float(np.sum(ranks**2))) / 2.0
        p = _normal_cdf((t_plus + 0.5 - mu) / sigma)
    p = min(max(p, 0.0), 1.0)
    return WilcoxonResult(statistic=t_plus, p_value=p, significant=p <= alpha)


@dataclass(frozen=True)
class LearningCurveReport:
    dataset_name: str
    labeled_size: int
    seed: int
    u_values: tuple[int, ...]
    truncated_u: tuple[int, ...]
    classifiers: tuple[str, ...]
    errors: np.ndarray  # (repeats, len(u_values), len(classifiers))
    test_sizes: np.ndarray  # (repeats, len(u_values))

    @property
    def n_repeats(self) -> int:
        return int(self.errors.shape[0])

    def _clf(self, classifier: str) -> int:
        try:
            return self.classifiers.index(classifier)
        except ValueError:
            raise InputError(f"unknown classifier {classifier!r}") from None

    def mean_error(self, classifier: str) -> np.ndarray:
        return self.errors[:, :, self._clf(classifier)].mean(axis=0)

    def standard_errors(self, classifier: str) -> np.ndarray:
        col = self.errors[:, :, self._clf(classifier)]
        return np.array([standard_error(col[:, k]) for k in range(col.shape[1])])


@dataclass(frozen=True)
class CvReport:
    dataset_name: str
    folds: int
    repeats: int
    labeled_size: int
    seed: int
    classifiers: tuple[str, ...]
    errors: np.ndarray  # (repeats, len(classifiers))
    degradation_counts: dict[str, int]
    significance: dict[str, WilcoxonResult]

    def _clf(self, classifier: str) -> int:
        try:
            return self.classifiers.index(classifier)
        except ValueError:
            raise InputError(f"unknown classifier {classifier!r}") from None

    def mean_error(self, classifier: str) -> float:
        return float(self.errors[:, self._clf(classifier)].mean())

    def repeat_errors(self, classifier: str) -> np.ndarray:
        return self.errors[:, self._clf(classifier)].copy()


def _draw_labeled(rng: np.random.Generator, pool: np.ndarray, labels: np.ndarray, count: int) -> np.ndarray:
    """Sample ``count`` indices from ``pool`` until both classes appear."""
    if count < 2:
        raise InputError("labeled draws need at least 2 rows to cover both classes")
    pool_labels = labels[pool]
    if not (np.any(pool_labels == 0.0) and np.any(pool_labels == 1.0)):
        raise DataError("candidate pool contains a single class")
    while True:
        drawn = np.sort(rng.choice(pool, size=count, replace=False))
        got = labels[drawn]
        if np.any(got == 0.0) and np.any(got == 1.0):
            return drawn


def _run_indexed(fn, n: int, workers: int) -> list:
    if workers <= 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n)))


def _fit_three(x_l, y_l, x_u):
    """Fit (supervised, self-learning, constrained) on one split.

    The constrained fit optimizes over every labeling self-learning could
    have produced, so its labeled-data objective may never exceed the
    self-learning refit's. That is checked here on every split; a violation
    means a solver bug, not bad data.
    """
    sup = fit_supervised(x_l, y_l)
    sl, _, _ = fit_self_learning(x_l, y_l, x_u)
    semi, _, report = fit_icls(x_l, y_l, x_u)
    if report.final_objective > empirical_risk(sl, x_l, y_l) + 1e-8:
        raise ToolkitError(
            "constrained fit ended above the self-learning objective "
            f"({report.final_objective} vs {empirical_risk(sl, x_l, y_l)})"
        )
    return sup, sl, semi


def _fit_predict_three(design, labels, labeled, unlabeled, test):
    """Errors of (supervised, self-learning, constrained) on the test rows."""
    x_l, y_l = design[labeled], labels[labeled]
    x_t, y_t = design[test], labels[test]
    sup, sl, semi = _fit_three(x_l, y_l, design[unlabeled])
    return (
        error_rate(classify(sup, x_t), y_t),
        error_rate(classify(sl, x_t), y_t),
        error_rate(classify(semi, x_t), y_t),
    )


def run_learning_curve(
    dataset: Dataset,
    u_schedule=DEFAULT_U_SCHEDULE,
    repeats: int = 100,
    seed: int = 42,
    standardize: bool = False,
    workers: int = 1,
    labeled_size: int | None = None,
    labeled_rule: str = "full-rank",
) -> LearningCurveReport:
    """Errors of the three classifiers as the unlabeled pool grows.

    The labeled draw is held fixed across the schedule within a repeat and
    the unlabeled sets are nested prefixes of one shuffle of the remainder,
    so within a repeat the curves differ only through the unlabeled data.
    Test rows are whatever remains, so the test set shrinks as U grows.
    Schedule entries too large for the dataset are dropped and reported.
    """
    if repeats < 1:
        raise InputError("repeats must be at least 1")
    schedule = sorted(set(int(u) for u in u_schedule))
    if any(u < 0 for u in schedule):
        raise InputError("u_schedule entries must be non-negative")
    n_labeled = labeled_size if labeled_size is not None else default_labeled_size(
        dataset.n_features, labeled_rule
    )
    kept = tuple(u for u in schedule if n_labeled + u < dataset.n)
    truncated = tuple(u for u in schedule if u not in kept)
    if not kept:
        raise InputError("dataset too small for every u_schedule entry")

    children = np.random.SeedSequence(seed).spawn(repeats)
    n_u = len(kept)

    def one_repeat(r: int):
        rng = np.random.default_rng(children[r])
        labeled = _draw_labeled(rng, np.arange(dataset.n), dataset.labels, n_labeled)
        remainder = np.setdiff1d(np.arange(dataset.n), labeled)
        order = rng.permutation(remainder)
        errs = np.empty((n_u, len(CURVE_CLASSIFIERS)), dtype=np.float64)
        sizes = np.empty(n_u, dtype=np.int64)
        for k, u in enumerate(kept):
            unlabeled = order[:u]
            test = order[u:]
            design = dataset.design
            if standardize:
                design = standardize_design(
                    design, np.concatenate([labeled, unlabeled])
                )
            errs[k] = _fit_predict_three(
                design, dataset.labels, labeled, unlabeled, test
            )
            sizes[k] = test.shape[0]
        return errs, sizes

    results = _run_indexed(one_repeat, repeats, workers)
    errors = np.stack([res[0] for res in results])
    test_sizes = np.stack([res[1] for res in results])
    return LearningCurveReport(
        dataset_name=dataset.name,
        labeled_size=n_labeled,
        seed=seed,
        u_values=kept,
        truncated_u=truncated,
        classifiers=CURVE_CLASSIFIERS,
        errors=errors,
        test_sizes=test_sizes,
    )


def run_cv(
    dataset: Dataset,
    folds: int = 10,
    repeats: int = 20,
    seed: int = 42,
    standardize: bool = False,
    workers: int = 1,
    labeled_size: int | None = None,
    labeled_rule: str = "full-rank",
    alpha: float = DEFAULT_ALPHA,
) -> CvReport:
    """Repeated k-fold comparison with an all-labels oracle.

    Within each fold the training rows are split into a small labeled draw
    and an unlabeled rest; each classifier predicts the held-out fold, and a
    repeat's error is the misclassification rate over all rows. Degradation
    counts say how often a semi-supervised classifier came out behind the
    supervised one across repeats, and the signed-rank flags test the paired
    repeat errors.
    """
    if folds < 2:
        raise InputError("folds must be at least 2")
    if dataset.n < folds:
        raise InputError("more folds than rows")
    if repeats < 1:
        raise InputError("repeats must be at least 1")
    n_labeled = labeled_size if labeled_size is not None else default_labeled_size(
        dataset.n_features, labeled_rule
    )
    largest_fold = -(-dataset.n // folds)
    if n_labeled > dataset.n - largest_fold:
        raise InputError(
            f"labeled size {n_labeled} exceeds the smallest training split "
            f"({dataset.n - largest_fold} rows)"
        )

    children = np.random.SeedSequence(seed).spawn(repeats)

    def one_repeat(r: int):
        rng = np.random.default_rng(children[r])
        order = rng.permutation(dataset.n)
        fold_slices = np.array_split(order, folds)
        preds = {name: np.empty(dataset.n, dtype=np.float64) for name in CV_CLASSIFIERS}
        for f in range(folds):
            test = fold_slices[f]
            train = np.concatenate([fold_slices[g] for g in range(folds) if g != f])
            labeled = _draw_labeled(rng, train, dataset.labels, n_labeled)
            unlabeled = np.setdiff1d(train, labeled)
            design = dataset.design
            if standardize:
                design = standardize_design(design, train)
            x_l, y_l = design[labeled], dataset.labels[labeled]
            x_t = design[test]

            sup, sl, semi = _fit_three(x_l, y_l, design[unlabeled])
            oracle = fit_supervised(design[train], dataset.labels[train])
            preds["supervised"][test] = classify(sup, x_t)
            preds["self_learning"][test] = classify(sl, x_t)
            preds["icls"][test] = classify(semi, x_t)
            preds["oracle"][test] = classify(oracle, x_t)
        return tuple(
            error_rate(preds[name], dataset.labels) for name in CV_CLASSIFIERS
        )

    results = _run_indexed(one_repeat, repeats, workers)
    errors = np.array(results, dtype=np.float64)
    sup_errs = errors[:, CV_CLASSIFIERS.index("supervised")]
    degradation = {}
    for name in ("self_learning", "icls"):
        semi_errs = errors[:, CV_CLASSIFIERS.index(name)]
        degradation[name] = int(np.sum(semi_errs > sup_errs))

    sl_errs = errors[:, CV_CLASSIFIERS.index("self_learning")]
    icls_errs = errors[:, CV_CLASSIFIERS.index("icls")]
    if repeats >= 5:  # the signed-rank test needs at least 5 pairs
        significance = {
            "icls_better_than_self_learning": wilcoxon_signed_rank(icls_errs, sl_errs, alpha),
            "self_learning_better_than_icls": wilcoxon_signed_rank(sl_errs, icls_errs, alpha),
            "icls_worse_than_supervised": wilcoxon_signed_rank(sup_errs, icls_errs, alpha),
            "self_learning_worse_than_supervised": wilcoxon_signed_rank(sup_errs, sl_errs, alpha),
        }
    else:
        significance = {}
    return CvReport(
        dataset_name=dataset.name,
        folds=folds,
        repeats=repeats,
        labeled_size=n_labeled,
        seed=seed,
        classifiers=CV_CLASSIFIERS,
        errors=errors,
        degradation_counts=degradation,
        significance=significance,
    )
