import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from icls.data import GaussianSpec, gen_synthetic, make_split
from icls.errors import DimensionError
from icls.linalg import normal_projector
from icls.selflearn import fit_self_learning
from icls.supervised import LinearModel, classify, fit_supervised

# An instance whose imputed labels keep changing for two refits
# (found by search, then frozen).
SLOW_X_L = np.array(
    [
        [1.0, 4.94487136],
        [1.0, -2.4192531],
        [1.0, -3.46600541],
        [1.0, -2.30834285],
    ]
)
SLOW_Y = np.array([0.0, 1.0, 1.0, 0.0])
SLOW_X_U = np.array(
    [
        [1.0, -0.74411338],
        [1.0, -0.12431544],
        [1.0, -1.19322782],
        [1.0, -1.38052683],
        [1.0, -1.28243099],
    ]
)


def test_no_unlabeled_returns_supervised():
    rng = np.random.default_rng(0)
    x_l = np.hstack([np.ones((6, 1)), rng.normal(size=(6, 2))])
    y = np.array([0.0, 1.0, 0.0, 1.0, 1.0, 0.0])
    model, imputed, report = fit_self_learning(x_l, y, np.empty((0, 3)))
    assert_array_equal(model.beta, fit_supervised(x_l, y).beta)
    assert imputed.shape == (0,)
    assert report == type(report)(1, (), True)


def test_fixed_point_converges_in_two_iterations():
    # well separated data: the first refit cannot flip anything
    x_l = np.array([[1.0, -3.0], [1.0, -2.5], [1.0, 2.5], [1.0, 3.0]])
    y = np.array([0.0, 0.0, 1.0, 1.0])
    x_u = np.array([[1.0, -2.8], [1.0, 2.9]])
    model, imputed, report = fit_self_learning(x_l, y, x_u)
    assert report.iterations == 2
    assert report.label_flips_per_iter == (0,)
    assert report.converged
    assert_array_equal(imputed, [0.0, 1.0])
    assert_array_equal(classify(model, x_u), imputed)


def test_hand_executed_iteration():
    # labeled (x=1 -> 1), (x=-1 -> 0); one unlabeled point at x=3.
    # supervised fit interpolates: beta = [1/2, 1/2]; score(3) = 2 -> label 1.
    # refit on the three points: beta = [5/12, 1/4]; score(3) = 7/6 -> still 1.
    x_l = np.array([[1.0, 1.0], [1.0, -1.0]])
    y = np.array([1.0, 0.0])
    x_u = np.array([[1.0, 3.0]])
    model, imputed, report = fit_self_learning(x_l, y, x_u)
    assert_array_equal(imputed, [1.0])
    assert_allclose(model.beta, [5.0 / 12.0, 0.25], atol=1e-12)
    assert report.iterations == 2
    assert report.converged


def test_flipping_instance_converges_with_recorded_flips():
    model, imputed, report = fit_self_learning(SLOW_X_L, SLOW_Y, SLOW_X_U)
    assert report.converged
    assert report.label_flips_per_iter == (1, 1, 0)
    assert report.iterations == 4
    assert_array_equal(classify(model, SLOW_X_U), imputed)


def test_max_iter_cap_reports_not_converged():
    model, imputed, report = fit_self_learning(SLOW_X_L, SLOW_Y, SLOW_X_U, max_iter=2)
    assert not report.converged
    assert report.iterations == 2
    assert all(f >= 0 for f in report.label_flips_per_iter)
    # returned pair stays refit-consistent
    projector = normal_projector(np.vstack([SLOW_X_L, SLOW_X_U]))
    refit = projector @ np.concatenate([SLOW_Y, imputed])
    assert_array_equal(refit, model.beta)


def test_rerunning_one_iteration_from_converged_state_changes_nothing():
    rng = np.random.default_rng(1)
    dataset = gen_synthetic(GaussianSpec(dim=2, separation=3.0), 60, seed=4)
    split = make_split(dataset, 12, 20, seed=9)
    x_l = dataset.design[split.labeled_idx]
    y = dataset.labels[split.labeled_idx]
    x_u = dataset.design[split.unlabeled_idx]
    model, imputed, report = fit_self_learning(x_l, y, x_u)
    assert report.converged
    projector = normal_projector(np.vstack([x_l, x_u]))
    refit = LinearModel(beta=projector @ np.concatenate([y, imputed]))
    assert_array_equal(refit.beta, model.beta)
    assert_array_equal(classify(refit, x_u), imputed)


def test_duplicated_unlabeled_points_keep_supervised_predictions():
    # unlabeled rows are copies of labeled rows; with clearly separated
    # classes the supervised predictions are immediately self-consistent
    dataset = gen_synthetic(GaussianSpec(dim=2, separation=6.0), 40, seed=2)
    x_l, y = dataset.design, dataset.labels
    model_sup = fit_supervised(x_l, y)
    model, imputed, report = fit_self_learning(x_l, y, x_l.copy())
    assert report.converged
    assert_array_equal(imputed, classify(model_sup, x_l))


def test_iteration_budget_respected():
    for cap in (1, 2, 3, 10):
        _, _, report = fit_self_learning(SLOW_X_L, SLOW_Y, SLOW_X_U, max_iter=cap)
        assert report.iterations <= cap


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        fit_self_learning(np.ones((2, 3)), np.ones(2), np.ones((2, 2)))
