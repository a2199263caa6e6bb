import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from icls.errors import DimensionError, InputError
from icls.linalg import (
    matmul,
    matvec,
    normal_projector,
    pseudo_inverse,
    solve_normal_equations,
    transpose,
)

from conftest import descent_least_squares


class TestSolveNormalEquations:
    def test_exact_line_through_points(self):
        design = np.array([[1.0, 0.0], [1.0, 1.0], [1.0, 2.0]])
        beta = solve_normal_equations(design, np.array([0.0, 1.0, 2.0]))
        assert_allclose(beta, [0.0, 1.0], atol=1e-12)

    def test_zero_targets_give_zero_solution(self):
        rng = np.random.default_rng(7)
        design = rng.normal(size=(5, 3))
        beta = solve_normal_equations(design, np.zeros(5))
        assert_array_equal(beta, np.zeros(3))

    def test_matches_descent_oracle(self):
        rng = np.random.default_rng(11)
        design = rng.normal(size=(6, 3))
        targets = rng.normal(size=6)
        beta = solve_normal_equations(design, targets)
        oracle = descent_least_squares(design, targets)
        assert_allclose(beta, oracle, atol=1e-8)

    def test_minimum_norm_on_rank_deficient_design(self):
        # duplicated column: infinitely many minimizers, the returned one
        # must have the smallest norm
        design = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        targets = np.array([1.0, 2.0, 3.0])
        beta = solve_normal_equations(design, targets)
        assert_allclose(design @ beta, targets, atol=1e-10)
        assert_allclose(beta, [0.5, 0.5], atol=1e-10)

    def test_normal_equations_residual(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            design = rng.normal(size=(12, 4))
            targets = rng.normal(size=12)
            beta = solve_normal_equations(design, targets)
            resid = design.T @ (design @ beta - targets)
            scale = max(1.0, float(np.max(np.abs(design.T @ targets))))
            assert np.max(np.abs(resid)) < 1e-8 * scale

    def test_deterministic(self):
        rng = np.random.default_rng(5)
        design = rng.normal(size=(8, 3))
        targets = rng.normal(size=8)
        first = solve_normal_equations(design, targets)
        second = solve_normal_equations(design, targets)
        assert_array_equal(first, second)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            solve_normal_equations(np.ones((3, 2)), np.ones(4))

    def test_non_finite_input(self):
        with pytest.raises(InputError):
            solve_normal_equations(np.array([[np.nan, 1.0]]), np.ones(1))


class TestPseudoInverse:
    def test_identity(self):
        assert_array_equal(pseudo_inverse(np.eye(3)), np.eye(3))

    def test_singular_diagonal(self):
        result = pseudo_inverse(np.diag([2.0, 0.0]))
        assert_allclose(result, np.diag([0.5, 0.0]), atol=1e-15)

    def test_penrose_conditions_on_random_psd(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            root = rng.normal(size=(4, 3))
            mat = root @ root.T  # rank <= 3, so genuinely singular
            pinv = pseudo_inverse(mat)
            assert_allclose(mat @ pinv @ mat, mat, atol=1e-8)
            assert_allclose(pinv @ mat @ pinv, pinv, atol=1e-8)
            assert_allclose((mat @ pinv).T, mat @ pinv, atol=1e-8)
            assert_allclose((pinv @ mat).T, pinv @ mat, atol=1e-8)

    def test_zero_matrix(self):
        assert_array_equal(pseudo_inverse(np.zeros((3, 3))), np.zeros((3, 3)))

    def test_rejects_asymmetric(self):
        with pytest.raises(InputError):
            pseudo_inverse(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_accepts_roundoff_asymmetry(self):
        mat = np.array([[2.0, 1.0], [1.0 + 1e-13, 2.0]])
        pinv = pseudo_inverse(mat)
        sym = (mat + mat.T) / 2
        assert_allclose(sym @ pinv @ sym, sym, atol=1e-10)

    def test_rejects_non_square(self):
        with pytest.raises(DimensionError):
            pseudo_inverse(np.ones((2, 3)))


class TestDenseProducts:
    def test_identity_times_matrix(self):
        rng = np.random.default_rng(1)
        mat = rng.normal(size=(4, 4))
        assert_array_equal(matmul(np.eye(4), mat), mat)

    def test_double_transpose(self):
        rng = np.random.default_rng(2)
        mat = rng.normal(size=(3, 5))
        assert_array_equal(transpose(transpose(mat)), mat)

    def test_matmul_against_triple_loop(self):
        rng = np.random.default_rng(4)
        a = rng.normal(size=(3, 4))
        b = rng.normal(size=(4, 2))
        expected = np.zeros((3, 2))
        for i in range(3):
            for j in range(2):
                for k in range(4):
                    expected[i, j] += a[i, k] * b[k, j]
        assert_allclose(matmul(a, b), expected, atol=1e-14)

    def test_matvec_against_loop(self):
        rng = np.random.default_rng(6)
        a = rng.normal(size=(5, 3))
        v = rng.normal(size=3)
        expected = [sum(a[i, k] * v[k] for k in range(3)) for i in range(5)]
        assert_allclose(matvec(a, v), expected, atol=1e-14)

    def test_shape_errors(self):
        with pytest.raises(DimensionError):
            matmul(np.ones((2, 3)), np.ones((2, 3)))
        with pytest.raises(DimensionError):
            matvec(np.ones((2, 3)), np.ones(2))


class TestNormalProjector:
    def test_projector_applied_to_targets_solves(self):
        rng = np.random.default_rng(9)
        design = rng.normal(size=(7, 3))
        targets = rng.normal(size=7)
        proj = normal_projector(design)
        assert proj.shape == (3, 7)
        assert_array_equal(proj @ targets, solve_normal_equations(design, targets))

    def test_empty_design_rejected(self):
        with pytest.raises(InputError):
            normal_projector(np.empty((0, 2)))
