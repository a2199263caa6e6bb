import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from icls.errors import DimensionError, InputError
from icls.supervised import (
    LinearModel,
    classify,
    decision_values,
    empirical_risk,
    error_rate,
    fit_supervised,
)

from conftest import descent_least_squares


def test_interpolation_two_points():
    design = np.array([[1.0, 0.0], [1.0, 1.0]])
    model = fit_supervised(design, np.array([0.0, 1.0]))
    assert_allclose(model.beta, [0.0, 1.0], atol=1e-12)


def test_constant_labels_fit_intercept_only():
    rng = np.random.default_rng(0)
    design = np.hstack([np.ones((10, 1)), rng.normal(size=(10, 3))])
    model = fit_supervised(design, np.full(10, 0.7))
    assert_allclose(model.beta, [0.7, 0.0, 0.0, 0.0], atol=1e-10)


def test_training_risk_matches_descent_oracle():
    rng = np.random.default_rng(42)
    design = np.hstack([np.ones((20, 1)), rng.normal(size=(20, 2))])
    labels = rng.integers(0, 2, size=20).astype(float)
    model = fit_supervised(design, labels)
    oracle_beta = descent_least_squares(design, labels)
    fitted = empirical_risk(model, design, labels)
    oracle = empirical_risk(LinearModel(beta=oracle_beta), design, labels)
    assert abs(fitted - oracle) < 1e-8


def test_global_minimizer_under_perturbations():
    rng = np.random.default_rng(17)
    design = np.hstack([np.ones((15, 1)), rng.normal(size=(15, 2))])
    labels = rng.integers(0, 2, size=15).astype(float)
    model = fit_supervised(design, labels)
    base = empirical_risk(model, design, labels)
    for _ in range(100):
        delta = rng.normal(scale=0.1, size=3)
        perturbed = LinearModel(beta=model.beta + delta)
        assert empirical_risk(perturbed, design, labels) >= base - 1e-10


def test_decision_values_zero_beta():
    model = LinearModel(beta=np.zeros(3))
    assert_array_equal(decision_values(model, np.ones((4, 3))), np.zeros(4))


def test_decision_values_dot_product():
    model = LinearModel(beta=np.array([0.25, 0.5]))
    assert_allclose(decision_values(model, np.array([[1.0, 1.0]])), [0.75])


def test_decision_values_matches_loop():
    rng = np.random.default_rng(3)
    model = LinearModel(beta=rng.normal(size=4))
    design = rng.normal(size=(6, 4))
    expected = [sum(design[i, k] * model.beta[k] for k in range(4)) for i in range(6)]
    assert_allclose(decision_values(model, design), expected, atol=1e-12)


def test_classify_tie_goes_to_class_one():
    model = LinearModel(beta=np.array([0.5]))
    assert_array_equal(classify(model, np.array([[1.0]])), [1.0])


def test_classify_just_below_threshold():
    model = LinearModel(beta=np.array([0.49999]))
    assert_array_equal(classify(model, np.array([[1.0]])), [0.0])


def test_classify_matches_scalar_threshold():
    rng = np.random.default_rng(8)
    model = LinearModel(beta=rng.normal(size=3))
    design = rng.normal(size=(50, 3))
    scores = design @ model.beta
    expected = np.array([1.0 if s >= 0.5 else 0.0 for s in scores])
    assert_array_equal(classify(model, design), expected)


def test_classify_permutation_equivariance():
    rng = np.random.default_rng(9)
    model = LinearModel(beta=rng.normal(size=3))
    design = rng.normal(size=(20, 3))
    perm = rng.permutation(20)
    assert_array_equal(classify(model, design[perm]), classify(model, design)[perm])


class TestErrorRate:
    def test_identical(self):
        assert error_rate(np.array([0.0, 1.0, 1.0]), np.array([0.0, 1.0, 1.0])) == 0.0

    def test_complementary(self):
        assert error_rate(np.array([0.0, 1.0]), np.array([1.0, 0.0])) == 1.0

    def test_quarter(self):
        assert error_rate(np.array([0.0, 1.0, 1.0, 0.0]), np.array([0.0, 1.0, 0.0, 0.0])) == 0.25

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            error_rate(np.empty(0), np.empty(0))

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            error_rate(np.zeros(3), np.zeros(4))

    def test_non_binary_rejected(self):
        with pytest.raises(InputError):
            error_rate(np.array([0.5, 1.0]), np.array([0.0, 1.0]))


def test_fit_rejects_empty_design():
    with pytest.raises(InputError):
        fit_supervised(np.empty((0, 2)), np.empty(0))


def test_fit_rejects_out_of_range_labels():
    with pytest.raises(InputError):
        fit_supervised(np.ones((2, 1)), np.array([0.0, 2.0]))


def test_model_json_round_trip():
    model = LinearModel(
        beta=np.array([0.125, -3.5, 2.0]),
        intercept_first=True,
        class0="benign",
        class1="malignant",
    )
    text = model.to_json()
    loaded = LinearModel.from_json(text)
    assert_array_equal(loaded.beta, model.beta)
    assert loaded.intercept_first is True
    assert (loaded.class0, loaded.class1) == ("benign", "malignant")
    import json

    assert set(json.loads(text)) == {"beta", "intercept_first", "class0", "class1"}
