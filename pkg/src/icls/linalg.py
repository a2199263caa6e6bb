"""Dense matrix primitives and the normal-equation solver.

Everything here operates on float64 numpy arrays. The least squares route
is deliberately the normal-equation one: form the Gram matrix, pseudo-invert
it by symmetric eigendecomposition, and keep the resulting projector
``pinv(X'X) X'`` around. Downstream code reuses that projector as a fixed
linear operator, so a QR or SVD solver that never materializes it would not
fit the rest of the toolkit.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError, InputError

# Relative eigenvalue cutoff for pseudo_inverse is DEFAULT_TOL_SCALE times
# the larger matrix dimension (standard numerical-rank heuristic).
DEFAULT_TOL_SCALE = 1e-12

# Absolute/relative bound on |M - M'| accepted by pseudo_inverse.
SYMMETRY_TOL = 1e-10


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and convert to a C-contiguous float64 2-D array."""
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite entries")
    return arr


def as_vector(a, name: str = "vector") -> np.ndarray:
    """Validate and convert to a contiguous float64 1-D array."""
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite entries")
    return arr


def transpose(a) -> np.ndarray:
    a = as_matrix(a)
    return np.ascontiguousarray(a.T)


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a, "left operand")
    b = as_matrix(b, "right operand")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}"
        )
    return a @ b


def matvec(a, v) -> np.ndarray:
    a = as_matrix(a, "matrix")
    v = as_vector(v, "vector")
    if a.shape[1] != v.shape[0]:
        raise DimensionError(
            f"cannot apply {a.shape[0]}x{a.shape[1]} matrix to length-{v.shape[0]} vector"
        )
    return a @ v


def pseudo_inverse(square_sym, tol_rel: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudo-inverse of a symmetric PSD matrix.

    Computed by symmetric eigendecomposition after symmetrizing the input
    (round-off asymmetry up to SYMMETRY_TOL is tolerated, anything larger is
    rejected). Eigenvalues at or below ``tol_rel`` times the largest
    eigenvalue are treated as exact zeros. ``tol_rel`` defaults to
    ``DEFAULT_TOL_SCALE * max(rows, cols)``.
    """
    m = as_matrix(square_sym, "square_sym")
    rows, cols = m.shape
    if rows != cols:
        raise DimensionError(f"expected a square matrix, got {rows}x{cols}")
    scale = max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
    asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if asym > SYMMETRY_TOL * scale:
        raise InputError(
            f"matrix asymmetry {asym:.3e} exceeds tolerance {SYMMETRY_TOL * scale:.3e}"
        )
    if tol_rel is None:
        tol_rel = DEFAULT_TOL_SCALE * max(rows, cols)

    sym = (m + m.T) / 2.0
    eigvals, eigvecs = np.linalg.eigh(sym)
    cutoff = tol_rel * max(float(eigvals[-1]), 0.0)
    keep = eigvals > max(cutoff, 0.0)
    inv_vals = np.zeros_like(eigvals)
    inv_vals[keep] = 1.0 / eigvals[keep]
    return (eigvecs * inv_vals) @ eigvecs.T


def normal_projector(design) -> np.ndarray:
    """The operator ``pinv(X'X) X'`` that maps targets to coefficients.

    Applying it to a target vector gives the minimum-norm least squares
    solution. It is exposed on its own because the semi-supervised solver
    reuses it as a constant operator across many target vectors.
    """
    x = as_matrix(design, "design")
    if x.shape[0] < 1:
        raise InputError("design matrix must have at least one row")
    return pseudo_inverse(x.T @ x) @ x.T


def solve_normal_equations(design, targets) -> np.ndarray:
    """Least squares coefficients for ``design @ beta ~ targets``.

    Uses the normal equations with a pseudo-inverse, so rank-deficient or
    ill-conditioned Gram matrices yield the minimum-norm solution instead of
    failing.
    """
    x = as_matrix(design, "design")
    y = as_vector(targets, "targets")
    if x.shape[0] != y.shape[0]:
        raise DimensionError(
            f"design has {x.shape[0]} rows but targets has length {y.shape[0]}"
        )
    if x.shape[0] < 1:
        raise InputError("need at least one row")
    return normal_projector(x) @ y
